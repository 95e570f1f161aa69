import { spawnSync } from "node:child_process";

import type { BoundLabel, ObmoOptions } from "./types.js";

/** An operation failed inside the toolkit; `field` names the offending
 * record field for malformed-input errors. */
export class BridgeError extends Error {
  readonly type: string;
  readonly field?: string;

  constructor(type: string, message: string, field?: string) {
    super(message);
    this.name = "BridgeError";
    this.type = type;
    this.field = field;
  }
}

/** The bridge process itself could not be run or returned garbage. */
export class BridgeProcessError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BridgeProcessError";
  }
}

export interface RawResponse {
  ok: boolean;
  value?: unknown;
  error?: { type: string; message: string; field?: string };
}

function commandLine(): [string, string[]] {
  const python = process.env.OBMO3D_PYTHON ?? "python3";
  return [python, ["-m", "obmo3d", "score"]];
}

/** One bridge process round trip for a batch of raw requests. */
export function runBatch(requests: Record<string, unknown>[]): RawResponse[] {
  const [cmd, args] = commandLine();
  const proc = spawnSync(cmd, args, {
    input: JSON.stringify(requests),
    encoding: "utf8",
    maxBuffer: 1 << 28,
  });
  if (proc.error) {
    throw new BridgeProcessError(`failed to spawn ${cmd}: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    throw new BridgeProcessError(
      `bridge exited with status ${proc.status}: ${proc.stderr.trim()}`
    );
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(proc.stdout);
  } catch {
    throw new BridgeProcessError(`bridge produced non-JSON output: ${proc.stdout.slice(0, 200)}`);
  }
  if (!Array.isArray(parsed) || parsed.length !== requests.length) {
    throw new BridgeProcessError("bridge response shape does not match the request batch");
  }
  return parsed as RawResponse[];
}

export function unwrap<T>(response: RawResponse): T {
  if (response.ok) {
    return response.value as T;
  }
  const error = response.error ?? { type: "unknown", message: "unknown bridge error" };
  throw new BridgeError(error.type, error.message, error.field);
}

/** Single-operation convenience wrapper. */
export function call<T>(request: Record<string, unknown>): T {
  return unwrap<T>(runBatch([request])[0]);
}

export function labelToWire(label: BoundLabel): Record<string, unknown> {
  return {
    class_name: label.className,
    truncation: label.truncation,
    occlusion: label.occlusion,
    alpha: label.alpha,
    bbox2d: label.bbox2d,
    dims: label.dims,
    location: label.location,
    yaw: label.yaw,
    score: label.score,
  };
}

export function labelFromWire(wire: Record<string, unknown>): BoundLabel {
  return {
    className: wire.class_name as string,
    truncation: wire.truncation as number,
    occlusion: wire.occlusion as number,
    alpha: wire.alpha as number,
    bbox2d: wire.bbox2d as [number, number, number, number],
    dims: wire.dims as [number, number, number],
    location: wire.location as [number, number, number],
    yaw: wire.yaw as number,
    score: (wire.score ?? null) as number | null,
  };
}

export function optionsToWire(options?: ObmoOptions): Record<string, unknown> | undefined {
  if (!options) {
    return undefined;
  }
  const wire: Record<string, unknown> = {};
  if (options.deltaZ !== undefined) wire.delta_z = options.deltaZ;
  if (options.strategy !== undefined) wire.strategy = options.strategy;
  if (options.c !== undefined) wire.c = options.c;
  if (options.lambda !== undefined) wire.lambda = options.lambda;
  if (options.filterThreshold !== undefined) wire.filter_threshold = options.filterThreshold;
  if (options.useAnnotatedGtBox !== undefined) {
    wire.use_annotated_gt_box = options.useAnnotatedGtBox;
  }
  if (options.classes !== undefined) {
    const classes: Record<string, Record<string, unknown>> = {};
    for (const [name, override] of Object.entries(options.classes)) {
      const section: Record<string, unknown> = {};
      if (override.deltaZ !== undefined) section.delta_z = override.deltaZ;
      if (override.c !== undefined) section.c = override.c;
      classes[name] = section;
    }
    wire.classes = classes;
  }
  return wire;
}
