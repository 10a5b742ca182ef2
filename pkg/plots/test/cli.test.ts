import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

const HERE = dirname(fileURLToPath(import.meta.url));
const CLI = resolve(HERE, "../dist/cli.js");
const BASELINES = resolve(HERE, "../../data/baselines");

const dir = mkdtempSync(join(tmpdir(), "plots-cli-"));

interface Run {
  status: number;
  stdout: string;
  stderr: string;
}

function run(...argv: string[]): Run {
  try {
    const stdout = execFileSync("node", [CLI, ...argv], { encoding: "utf-8" });
    return { status: 0, stdout, stderr: "" };
  } catch (err) {
    const e = err as { status: number; stdout: string; stderr: string };
    return { status: e.status, stdout: String(e.stdout), stderr: String(e.stderr) };
  }
}

describe("render command", () => {
  it("writes the figure and says so", () => {
    const out = join(dir, "vp.svg");
    const res = run(
      "render", "--kind", "vp_convergence",
      "--in", join(BASELINES, "vp_full_shift_entropy.csv"),
      "--baseline", join(BASELINES, "vp_full_shift_entropy_extrapolation.csv"),
      "--out", out,
    );
    expect(res.status).toBe(0);
    expect(res.stdout).toContain(`wrote ${out}`);
    expect(existsSync(out)).toBe(true);
  });

  it("rejects an unknown kind", () => {
    const res = run(
      "render", "--kind", "pie_chart",
      "--in", join(BASELINES, "cost_curve_full_shift_pressure.csv"),
      "--out", join(dir, "pie.svg"),
    );
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("kind");
  });

  it("exits nonzero on an empty CSV and writes nothing", () => {
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "s,cost\n");
    const out = join(dir, "empty.svg");
    const res = run("render", "--kind", "cost_curve", "--in", empty, "--out", out);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("no data rows");
    expect(existsSync(out)).toBe(false);
  });

  it("surfaces the column diff on a schema mismatch", () => {
    const res = run(
      "render", "--kind", "vp_convergence",
      "--in", join(BASELINES, "cost_curve_full_shift_pressure.csv"),
      "--out", join(dir, "mismatch.svg"),
    );
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("missing columns [epsilon");
    expect(res.stderr).toContain("unexpected columns [s, cost]");
  });

  it("requires a command", () => {
    const res = run();
    expect(res.status).toBe(1);
  });
});
