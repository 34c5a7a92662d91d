// DOM wiring: connects the pure view model to the canvas, keyboard, buttons,
// rating form and the session socket.

import { connectSession, SessionSocket } from "./net.js";
import { RatingValues, ServerMessage, SteerKey } from "./protocol.js";
import { drawFrame, formatCountdown, Viewport } from "./render.js";
import { ReplayPlayer } from "./replay.js";
import {
  applyKeyEvent,
  applyServerMessage,
  clickMoveToTarget,
  clickShareTarget,
  initialState,
  moveButtonEnabled,
  ratingFormVisible,
  shareButtonEnabled,
  submitRating,
  ViewState,
} from "./viewmodel.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const canvas = $<HTMLCanvasElement>("arena");
const ctx = canvas.getContext("2d")!;
const view: Viewport = { sizePx: canvas.width };

let state: ViewState = initialState();
let socket: SessionSocket | null = null;
let replay: ReplayPlayer | null = null;

function sendAll(outbound: string[]): void {
  for (const frame of outbound) socket?.send(frame);
}

function update(next: { state: ViewState; outbound: string[] }): void {
  state = next.state;
  sendAll(next.outbound);
  syncPanel();
}

function syncPanel(): void {
  $("phase").textContent = state.phase;
  $("round").textContent = state.roundIndex === null ? "-" : String(state.roundIndex);
  $("timer").textContent = state.snapshot
    ? formatCountdown(state.snapshot.remaining_s)
    : formatCountdown(state.timeLimitS);
  const share = $<HTMLButtonElement>("share-btn");
  const move = $<HTMLButtonElement>("move-btn");
  share.disabled = !shareButtonEnabled(state);
  move.disabled = !moveButtonEnabled(state);
  $("notices").innerHTML = state.notices
    .map((n) => `<li class="notice-${n.code}">${n.text}</li>`)
    .join("");
  const form = $("rating-form");
  form.style.display = ratingFormVisible(state) ? "block" : "none";
  $("rating-error").textContent = state.ratingError ?? "";
  if (state.lastResult && state.phase === "rating") {
    $("round-result").textContent = state.lastResult.success
      ? `Success in ${state.lastResult.completionS?.toFixed(1)} s - rate the team to continue`
      : "Time is up - rate the team to continue";
  } else if (state.phase === "done") {
    $("round-result").textContent = "Session complete. Thank you!";
  } else {
    $("round-result").textContent = "";
  }
}

function renderLoop(): void {
  drawFrame(ctx, view, state.snapshot);
  requestAnimationFrame(renderLoop);
}

function keyOf(event: KeyboardEvent): SteerKey | null {
  if (event.key === "ArrowLeft") return "left";
  if (event.key === "ArrowRight") return "right";
  return null;
}

window.addEventListener("keydown", (event) => {
  const key = keyOf(event);
  if (!key) return;
  event.preventDefault();
  update(applyKeyEvent(state, { kind: "down", key, repeat: event.repeat, timeMs: Date.now() }));
});

window.addEventListener("keyup", (event) => {
  const key = keyOf(event);
  if (!key) return;
  event.preventDefault();
  update(applyKeyEvent(state, { kind: "up", key, repeat: false, timeMs: Date.now() }));
});

$("share-btn").addEventListener("click", () => update(clickShareTarget(state, Date.now())));
$("move-btn").addEventListener("click", () => update(clickMoveToTarget(state, Date.now())));

$("rating-submit").addEventListener("click", () => {
  const values: Partial<RatingValues> = {};
  for (const name of ["warmth", "competence", "joint_effort"] as const) {
    const checked = document.querySelector<HTMLInputElement>(`input[name=${name}]:checked`);
    if (checked) values[name] = Number(checked.value);
  }
  update(submitRating(state, values));
  if (!state.ratingError) {
    document
      .querySelectorAll<HTMLInputElement>("#rating-form input[type=radio]")
      .forEach((el) => (el.checked = false));
  }
});

function onServerMessage(msg: ServerMessage | null): void {
  update(applyServerMessage(state, msg));
  if (msg === null) {
    $("connection").textContent = "malformed message from server";
  }
}

$("connect-btn").addEventListener("click", () => {
  replay?.stop();
  socket?.close();
  const base = $<HTMLInputElement>("server-url").value.trim();
  const sessionId = $<HTMLInputElement>("session-id").value.trim();
  state = initialState();
  socket = connectSession(base, sessionId, onServerMessage, (reason) => {
    $("connection").textContent = `disconnected: ${reason}`;
  });
  $("connection").textContent = `connected to session ${sessionId}`;
  syncPanel();
});

$("create-btn").addEventListener("click", async () => {
  const base = $<HTMLInputElement>("server-url").value.trim();
  const seed = Math.floor(Math.random() * 1_000_000);
  const response = await fetch(`${base}/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ mode: "study", seed }),
  });
  if (!response.ok) {
    $("connection").textContent = `session creation failed: HTTP ${response.status}`;
    return;
  }
  const body = (await response.json()) as { session_id: string };
  $<HTMLInputElement>("session-id").value = body.session_id;
  $("connection").textContent = `created session ${body.session_id} (${seed})`;
});

$<HTMLInputElement>("replay-file").addEventListener("change", async (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  socket?.close();
  socket = null;
  replay?.stop();
  try {
    replay = new ReplayPlayer(await file.text(), (snapshot) => {
      state = { ...state, phase: "running", snapshot };
      syncPanel();
    });
    replay.start();
    $("connection").textContent = `replaying ${file.name}`;
  } catch (err) {
    $("connection").textContent = `replay failed: ${String(err)}`;
  }
});

syncPanel();
renderLoop();
