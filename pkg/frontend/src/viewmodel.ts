// Client state machine. Pure reducer: server messages and local intents go in,
// state plus outbound frames come out. The client never simulates; robots only
// move when a fresh snapshot arrives.

import {
  RatingValues,
  ServerMessage,
  Snapshot,
  SteerKey,
  buttonMessage,
  keyMessage,
  ratingMessage,
  readyMessage,
} from "./protocol.js";

export type Phase = "waiting" | "running" | "rating" | "done";

export interface NoticeEntry {
  code: string;
  text: string;
}

export interface RoundResult {
  success: boolean;
  completionS: number | null;
}

export interface ViewState {
  phase: Phase;
  roundIndex: number | null;
  timeLimitS: number;
  snapshot: Snapshot | null;
  lastResult: RoundResult | null;
  heldKeys: SteerKey[];
  notices: NoticeEntry[];
  ratingError: string | null;
  ratingPending: boolean;
  parseErrors: number;
}

export interface StepResult {
  state: ViewState;
  outbound: string[];
}

const MAX_NOTICES = 6;

export function initialState(): ViewState {
  return {
    phase: "waiting",
    roundIndex: null,
    timeLimitS: 60,
    snapshot: null,
    lastResult: null,
    heldKeys: [],
    notices: [],
    ratingError: null,
    ratingPending: false,
    parseErrors: 0,
  };
}

function withNotice(state: ViewState, code: string, text: string): ViewState {
  const notices = [...state.notices, { code, text }].slice(-MAX_NOTICES);
  return { ...state, notices };
}

export function humanRobot(snapshot: Snapshot | null) {
  return snapshot?.robots.find((r) => r.is_human) ?? null;
}

/** Move-to-target engaged: the robot itself reports the mode; keys are dead. */
export function moveEngaged(state: ViewState): boolean {
  return humanRobot(state.snapshot)?.mode === "move_to_target";
}

export function shareButtonEnabled(state: ViewState): boolean {
  return (
    state.phase === "running" &&
    (state.snapshot?.human_informed ?? false) &&
    !moveEngaged(state)
  );
}

export function moveButtonEnabled(state: ViewState): boolean {
  return shareButtonEnabled(state);
}

export function ratingFormVisible(state: ViewState): boolean {
  return state.phase === "rating";
}

export function applyServerMessage(state: ViewState, msg: ServerMessage | null): StepResult {
  if (msg === null) {
    return { state: { ...state, parseErrors: state.parseErrors + 1 }, outbound: [] };
  }
  switch (msg.type) {
    case "round_start": {
      const next: ViewState = {
        ...state,
        phase: "running",
        roundIndex: msg.round_index,
        timeLimitS: msg.time_limit_s,
        snapshot: null,
        lastResult: null,
        heldKeys: [],
        ratingError: null,
        ratingPending: false,
      };
      return { state: next, outbound: [readyMessage()] };
    }
    case "snapshot": {
      // Gating mirror: snapshots never advance the view during the rating phase.
      if (state.phase !== "running") {
        return { state, outbound: [] };
      }
      return { state: { ...state, snapshot: msg }, outbound: [] };
    }
    case "round_end": {
      return {
        state: {
          ...state,
          phase: "rating",
          lastResult: { success: msg.success, completionS: msg.completion_s },
          heldKeys: [],
        },
        outbound: [],
      };
    }
    case "notice": {
      let next = withNotice(state, msg.code, msg.text);
      if (msg.code === "rating_accepted") {
        next = { ...next, ratingPending: false, ratingError: null, phase: "waiting" };
      } else if (msg.code.startsWith("rating_")) {
        // Rejection: surface inline, unlock the form, do not resubmit.
        next = { ...next, ratingPending: false, ratingError: msg.text };
      } else if (msg.code === "session_complete") {
        next = { ...next, phase: "done" };
      }
      return { state: next, outbound: [] };
    }
  }
}

export interface KeyEvent {
  kind: "down" | "up";
  key: SteerKey;
  repeat: boolean;
  timeMs: number;
}

/** Keyboard edges; auto-repeat and dead phases produce no traffic. */
export function applyKeyEvent(state: ViewState, event: KeyEvent): StepResult {
  if (state.phase !== "running" || moveEngaged(state)) {
    return { state, outbound: [] };
  }
  if (event.kind === "down") {
    if (event.repeat || state.heldKeys.includes(event.key)) {
      return { state, outbound: [] };
    }
    return {
      state: { ...state, heldKeys: [...state.heldKeys, event.key] },
      outbound: [keyMessage("key_down", event.key, event.timeMs)],
    };
  }
  if (!state.heldKeys.includes(event.key)) {
    return { state, outbound: [] };
  }
  return {
    state: { ...state, heldKeys: state.heldKeys.filter((k) => k !== event.key) },
    outbound: [keyMessage("key_up", event.key, event.timeMs)],
  };
}

export function clickShareTarget(state: ViewState, timeMs: number): StepResult {
  if (!shareButtonEnabled(state)) {
    return { state, outbound: [] };
  }
  return { state, outbound: [buttonMessage("share_target", timeMs)] };
}

export function clickMoveToTarget(state: ViewState, timeMs: number): StepResult {
  if (!moveButtonEnabled(state)) {
    return { state, outbound: [] };
  }
  return { state, outbound: [buttonMessage("move_to_target", timeMs)] };
}

export function ratingComplete(values: Partial<RatingValues>): values is RatingValues {
  return (
    Number.isInteger(values.warmth) &&
    Number.isInteger(values.competence) &&
    Number.isInteger(values.joint_effort)
  );
}

export function submitRating(state: ViewState, values: Partial<RatingValues>): StepResult {
  if (state.phase !== "rating" || state.ratingPending || state.roundIndex === null) {
    return { state, outbound: [] };
  }
  if (!ratingComplete(values)) {
    return {
      state: { ...state, ratingError: "Please answer all three questions." },
      outbound: [],
    };
  }
  return {
    state: { ...state, ratingPending: true, ratingError: null },
    outbound: [ratingMessage(state.roundIndex, values)],
  };
}
