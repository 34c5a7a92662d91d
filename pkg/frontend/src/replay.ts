// Offline playback of harness trajectory files (traj.jsonl): render recorded
// frames without any server, for observer-style viewing and debugging.

import { RobotMode, Snapshot } from "./protocol.js";

interface TrajectoryRobot {
  id: number;
  x: number;
  y: number;
  heading: number;
  mode: RobotMode;
}

interface TrajectoryFrame {
  clock: number;
  robots: TrajectoryRobot[];
  target: { visible: boolean; x?: number; y?: number; radius?: number };
}

export function parseTrajectory(text: string): TrajectoryFrame[] {
  const frames: TrajectoryFrame[] = [];
  for (const line of text.split("\n")) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    const data = JSON.parse(trimmed) as TrajectoryFrame;
    if (typeof data.clock !== "number" || !Array.isArray(data.robots)) {
      throw new Error("not a trajectory file");
    }
    frames.push(data);
  }
  if (frames.length === 0) {
    throw new Error("empty trajectory file");
  }
  return frames;
}

/** Recorded frames contain no operator robot; present them as plain snapshots. */
export function frameToSnapshot(frame: TrajectoryFrame, totalS: number): Snapshot {
  return {
    type: "snapshot",
    clock_s: frame.clock,
    remaining_s: Math.max(0, totalS - frame.clock),
    robots: frame.robots.map((r) => ({ ...r, is_human: false })),
    target: frame.target,
    comm_range_cm: 36,
    human_informed: false,
  };
}

export class ReplayPlayer {
  private frames: TrajectoryFrame[];
  private index = 0;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    text: string,
    private readonly onFrame: (snapshot: Snapshot) => void,
  ) {
    this.frames = parseTrajectory(text);
  }

  get durationS(): number {
    const last = this.frames[this.frames.length - 1];
    return last ? last.clock : 0;
  }

  start(intervalMs = 100): void {
    this.stop();
    this.index = 0;
    this.timer = setInterval(() => {
      const frame = this.frames[this.index];
      if (!frame) {
        this.stop();
        return;
      }
      this.onFrame(frameToSnapshot(frame, this.durationS));
      this.index += 1;
    }, intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
