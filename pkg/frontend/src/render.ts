// Canvas renderer: top-down arena to scale, mode-colored robots, the operator's
// robot marked "You" inside its red communication-range circle, target region
// when visible, and the countdown.

import { RobotMode, Snapshot } from "./protocol.js";

export const ARENA_SIDE_CM = 150;
export const ROBOT_RADIUS_CM = 3.5;
export const COMM_RANGE_CM = 36;

export const MODE_COLORS: Record<RobotMode, string> = {
  explore: "#2f6fde",
  share_target: "#e0b300",
  move_to_target: "#2a9d3f",
};

export interface Viewport {
  sizePx: number;
}

export function scalePxPerCm(view: Viewport): number {
  return view.sizePx / ARENA_SIDE_CM;
}

export function worldToScreen(view: Viewport, xCm: number, yCm: number): [number, number] {
  const s = scalePxPerCm(view);
  // World y grows upward; canvas y grows downward.
  return [xCm * s, view.sizePx - yCm * s];
}

export function robotRadiusPx(view: Viewport): number {
  return ROBOT_RADIUS_CM * scalePxPerCm(view);
}

export function commCircleRadiusPx(view: Viewport, commRangeCm = COMM_RANGE_CM): number {
  return commRangeCm * scalePxPerCm(view);
}

export function formatCountdown(remainingS: number): string {
  return `${Math.max(0, remainingS).toFixed(1)} s`;
}

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  snapshot: Snapshot | null,
): void {
  const size = view.sizePx;
  ctx.clearRect(0, 0, size, size);
  ctx.fillStyle = "#f4f1ea";
  ctx.fillRect(0, 0, size, size);
  ctx.strokeStyle = "#444";
  ctx.lineWidth = 2;
  ctx.strokeRect(1, 1, size - 2, size - 2);
  if (!snapshot) return;

  if (snapshot.target.visible && snapshot.target.x !== undefined) {
    const [tx, ty] = worldToScreen(view, snapshot.target.x, snapshot.target.y ?? 0);
    ctx.beginPath();
    ctx.arc(tx, ty, (snapshot.target.radius ?? 25) * scalePxPerCm(view), 0, 2 * Math.PI);
    ctx.fillStyle = "rgba(60, 170, 60, 0.18)";
    ctx.fill();
    ctx.strokeStyle = "rgba(60, 140, 60, 0.8)";
    ctx.lineWidth = 1.5;
    ctx.stroke();
  }

  for (const robot of snapshot.robots) {
    const [px, py] = worldToScreen(view, robot.x, robot.y);
    if (robot.is_human) {
      ctx.beginPath();
      ctx.arc(px, py, commCircleRadiusPx(view, snapshot.comm_range_cm), 0, 2 * Math.PI);
      ctx.strokeStyle = "#d22";
      ctx.lineWidth = 1.5;
      ctx.stroke();
    }
    const r = robotRadiusPx(view);
    ctx.beginPath();
    ctx.arc(px, py, r, 0, 2 * Math.PI);
    ctx.fillStyle = MODE_COLORS[robot.mode];
    ctx.fill();
    ctx.strokeStyle = "#222";
    ctx.lineWidth = 1;
    ctx.stroke();
    // Heading tick.
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(px + r * 1.6 * Math.cos(robot.heading), py - r * 1.6 * Math.sin(robot.heading));
    ctx.strokeStyle = "#111";
    ctx.stroke();
    if (robot.is_human) {
      ctx.fillStyle = "#d22";
      ctx.font = "bold 14px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText("You", px, py - r - 6);
    }
  }
}
