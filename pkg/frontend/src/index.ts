/** Node bindings for the obmo3d toolkit.
 *
 * Every function marshals plain records to the `obmo3d score` JSON bridge
 * and back; all geometry and scoring arithmetic happens in the toolkit
 * process, so results are identical to the Python API and the CLI.
 */

import {
  BridgeError,
  BridgeProcessError,
  call,
  labelFromWire,
  labelToWire,
  optionsToWire,
  runBatch,
  unwrap,
} from "./bridge.js";
import type {
  AugmentedFrame,
  AugmentStats,
  BoundLabel,
  ClassOverride,
  Intrinsics,
  ObmoOptions,
  PseudoResult,
} from "./types.js";

export { BridgeError, BridgeProcessError, runBatch, unwrap };
export type {
  AugmentedFrame,
  AugmentStats,
  BoundLabel,
  ClassOverride,
  Intrinsics,
  ObmoOptions,
  PseudoResult,
};

/** Linear quality score 1 - |deltaZ * z| / c. */
export function linearScore(z: number, deltaZ: number, c = 4): number {
  return call<number>({ op: "linear_score", z, delta_z: deltaZ, c });
}

/** 2D-IoU quality score between a ground truth and a pseudo label. */
export function iouScore(
  intrinsics: Intrinsics,
  gt: BoundLabel,
  pseudo: BoundLabel,
  imageSize?: [number, number],
  useAnnotatedGtBox = false
): number {
  return call<number>({
    op: "iou_score",
    intrinsics,
    gt: labelToWire(gt),
    pseudo: labelToWire(pseudo),
    image_size: imageSize,
    use_annotated_gt_box: useAnnotatedGtBox,
  });
}

/** Pinhole projection of a camera-frame point [x, y, depth]. */
export function project(
  intrinsics: Intrinsics,
  point: [number, number, number]
): { u: number; v: number } {
  return call<{ u: number; v: number }>({ op: "project", intrinsics, point });
}

/** Frustum-shifted pseudo labels for one frame's labels. */
export function generate(
  intrinsics: Intrinsics,
  labels: BoundLabel[],
  options?: ObmoOptions,
  imageSize?: [number, number]
): PseudoResult[] {
  const value = call<{
    results: { label: Record<string, unknown>; quality: number; delta_z: number }[];
  }>({
    op: "generate",
    intrinsics,
    labels: labels.map(labelToWire),
    config: optionsToWire(options),
    image_size: imageSize,
  });
  return value.results.map((r) => ({
    label: labelFromWire(r.label),
    quality: r.quality,
    deltaZ: r.delta_z,
  }));
}

interface WireStats {
  gt_labels: number;
  candidates: number;
  retained: number;
  dropped: number;
  skipped: number;
}

function frameFromWire(value: { text: string; stats: WireStats }): AugmentedFrame {
  return {
    text: value.text,
    stats: {
      gtLabels: value.stats.gt_labels,
      candidates: value.stats.candidates,
      retained: value.stats.retained,
      dropped: value.stats.dropped,
      skipped: value.stats.skipped,
    },
  };
}

/** Augment one frame given raw KITTI calibration and label file text.
 * The returned text is byte-identical to the file `obmo3d augment`
 * writes for the same inputs. */
export function augmentFrame(
  calibText: string,
  labelText: string,
  options?: ObmoOptions,
  imageSize?: [number, number]
): AugmentedFrame {
  return frameFromWire(
    call<{ text: string; stats: WireStats }>({
      op: "augment_frame",
      calib_text: calibText,
      label_text: labelText,
      config: optionsToWire(options),
      image_size: imageSize,
    })
  );
}

/** Batch variant of augmentFrame: one bridge round trip for many frames. */
export function augmentFrames(
  frames: { calibText: string; labelText: string }[],
  options?: ObmoOptions,
  imageSize?: [number, number]
): AugmentedFrame[] {
  const config = optionsToWire(options);
  const responses = runBatch(
    frames.map((frame) => ({
      op: "augment_frame",
      calib_text: frame.calibText,
      label_text: frame.labelText,
      config,
      image_size: imageSize,
    }))
  );
  return responses.map((response) =>
    frameFromWire(unwrap<{ text: string; stats: WireStats }>(response))
  );
}
