// Typed parsers for the sweep CSV contracts. Header mismatches throw:
// a renamed column upstream must fail loudly, not draw nonsense.

import Papa from "papaparse";

export interface DurationRow {
  scheme: string;
  n: number;
  tau_fs: number;
  phi: number;
  fidelity: number;
  mean: number;
  std: number;
}

export interface XiRow {
  scheme: string;
  n: number;
  xi: number;
  rotation_infidelity: number;
  n_c: number;
  n_r: number;
  fidelity: number;
  occ_mean: number;
  occ_std: number;
}

export interface PopulationRow {
  xi: number;
  internal_state: string;
  n: number;
  probability: number;
}

export interface TrajectoryRow {
  event_index: number;
  re: number;
  im: number;
}

export interface SnapshotRow {
  model: string;
  event_index: number;
  internal_state: string;
  n: number;
  probability: number;
}

const HEADERS = {
  duration: ["scheme", "n", "tau_fs", "phi", "fidelity", "mean", "std"],
  xi: ["scheme", "n", "xi", "rotation_infidelity", "n_c", "n_r",
    "fidelity", "occ_mean", "occ_std"],
  populations: ["xi", "internal_state", "n", "probability"],
  trajectory: ["event_index", "re", "im"],
  snapshots: ["model", "event_index", "internal_state", "n", "probability"],
} as const;

function parse<T>(text: string, contract: keyof typeof HEADERS): T[] {
  const result = Papa.parse<T>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    throw new Error(`CSV parse failed: ${result.errors[0].message}`);
  }
  const expected = HEADERS[contract];
  const got = result.meta.fields ?? [];
  if (got.length !== expected.length || expected.some((f, i) => got[i] !== f)) {
    throw new Error(
      `unexpected ${contract} header: got [${got.join(",")}], ` +
      `expected [${expected.join(",")}]`);
  }
  if (result.data.length === 0) {
    throw new Error(`${contract} CSV has no data rows`);
  }
  return result.data;
}

export const parseDuration = (text: string) => parse<DurationRow>(text, "duration");
export const parseXi = (text: string) => parse<XiRow>(text, "xi");
export const parsePopulations = (text: string) => parse<PopulationRow>(text, "populations");
export const parseTrajectory = (text: string) => parse<TrajectoryRow>(text, "trajectory");
export const parseSnapshots = (text: string) => parse<SnapshotRow>(text, "snapshots");
