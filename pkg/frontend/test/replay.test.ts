import { describe, expect, it } from "vitest";

import { frameToSnapshot, parseTrajectory } from "../src/replay.js";

const FRAME_0 = {
  clock: 0.0,
  robots: [{ id: 0, x: 10, y: 20, heading: 0.1, mode: "explore" }],
  target: { visible: false },
};
const FRAME_1 = {
  clock: 3.0,
  robots: [{ id: 0, x: 11, y: 20, heading: 0.1, mode: "move_to_target" }],
  target: { visible: true, x: 75, y: 75, radius: 25 },
};

describe("trajectory parsing", () => {
  it("reads one frame per line, skipping blanks", () => {
    const text = JSON.stringify(FRAME_0) + "\n\n" + JSON.stringify(FRAME_1) + "\n";
    const frames = parseTrajectory(text);
    expect(frames).toHaveLength(2);
    expect(frames[1]?.target.visible).toBe(true);
  });

  it("rejects files that are not trajectories", () => {
    expect(() => parseTrajectory("")).toThrow("empty");
    expect(() => parseTrajectory('{"foo": 1}')).toThrow("not a trajectory");
  });
});

describe("frame adaptation", () => {
  it("presents recorded frames as snapshots without an operator robot", () => {
    const snap = frameToSnapshot(FRAME_1 as never, 60);
    expect(snap.type).toBe("snapshot");
    expect(snap.remaining_s).toBe(57);
    expect(snap.robots[0]?.is_human).toBe(false);
    expect(snap.target.x).toBe(75);
  });
});
