// Wire types for the session socket. Units: centimeters, radians, seconds.

export type RobotMode = "explore" | "share_target" | "move_to_target";

export interface RobotSnapshot {
  id: number;
  x: number;
  y: number;
  heading: number;
  mode: RobotMode;
  is_human: boolean;
}

export interface TargetSnapshot {
  visible: boolean;
  x?: number;
  y?: number;
  radius?: number;
}

export interface Snapshot {
  type: "snapshot";
  clock_s: number;
  remaining_s: number;
  robots: RobotSnapshot[];
  target: TargetSnapshot;
  comm_range_cm: number;
  human_informed: boolean;
}

export interface RoundStart {
  type: "round_start";
  round_index: number;
  time_limit_s: number;
}

export interface RoundEnd {
  type: "round_end";
  success: boolean;
  completion_s: number | null;
}

export interface Notice {
  type: "notice";
  code: string;
  text: string;
}

export type ServerMessage = Snapshot | RoundStart | RoundEnd | Notice;

export type SteerKey = "left" | "right";

export interface RatingValues {
  warmth: number;
  competence: number;
  joint_effort: number;
}

const ROBOT_MODES = new Set(["explore", "share_target", "move_to_target"]);

function isRobot(value: unknown): value is RobotSnapshot {
  if (typeof value !== "object" || value === null) return false;
  const r = value as Record<string, unknown>;
  return (
    typeof r.id === "number" &&
    typeof r.x === "number" &&
    typeof r.y === "number" &&
    typeof r.heading === "number" &&
    typeof r.mode === "string" &&
    ROBOT_MODES.has(r.mode) &&
    typeof r.is_human === "boolean"
  );
}

/** Parse one socket frame; null means the frame is malformed. */
export function parseServerMessage(text: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  switch (msg.type) {
    case "snapshot": {
      const target = msg.target as Record<string, unknown> | undefined;
      if (
        typeof msg.clock_s !== "number" ||
        typeof msg.remaining_s !== "number" ||
        !Array.isArray(msg.robots) ||
        !msg.robots.every(isRobot) ||
        typeof target?.visible !== "boolean" ||
        typeof msg.comm_range_cm !== "number" ||
        typeof msg.human_informed !== "boolean"
      ) {
        return null;
      }
      return msg as unknown as Snapshot;
    }
    case "round_start":
      if (typeof msg.round_index !== "number" || typeof msg.time_limit_s !== "number") {
        return null;
      }
      return msg as unknown as RoundStart;
    case "round_end":
      if (typeof msg.success !== "boolean") return null;
      return msg as unknown as RoundEnd;
    case "notice":
      if (typeof msg.code !== "string" || typeof msg.text !== "string") return null;
      return msg as unknown as Notice;
    default:
      return null;
  }
}

export function readyMessage(): string {
  return JSON.stringify({ type: "ready" });
}

export function keyMessage(kind: "key_down" | "key_up", key: SteerKey, clientTimeMs: number): string {
  return JSON.stringify({ type: "input", kind, key, client_time: clientTimeMs });
}

export function buttonMessage(kind: "share_target" | "move_to_target", clientTimeMs: number): string {
  return JSON.stringify({ type: "input", kind, client_time: clientTimeMs });
}

export function ratingMessage(roundIndex: number, values: RatingValues): string {
  return JSON.stringify({
    type: "rating",
    round_index: roundIndex,
    warmth: values.warmth,
    competence: values.competence,
    joint_effort: values.joint_effort,
  });
}
