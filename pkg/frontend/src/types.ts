/** Plain-record mirror of a KITTI object label. */
export interface BoundLabel {
  className: string;
  truncation: number;
  occlusion: number;
  alpha: number;
  /** [left, top, right, bottom] in pixels */
  bbox2d: [number, number, number, number];
  /** [height, width, length] in meters */
  dims: [number, number, number];
  /** bottom-center [x, y, z] in camera coordinates, meters */
  location: [number, number, number];
  yaw: number;
  score: number | null;
}

/** Rectified pinhole parameters (unit scale factor). */
export interface Intrinsics {
  fx: number;
  fy: number;
  cx: number;
  cy: number;
}

export interface ClassOverride {
  /** fractional depth offsets, e.g. [-0.04, 0.04] */
  deltaZ?: number[];
  c?: number;
}

/** Augmentation settings; omitted fields use the shipped defaults. */
export interface ObmoOptions {
  deltaZ?: number[];
  strategy?: "iou" | "linear";
  c?: number;
  lambda?: number;
  filterThreshold?: number;
  useAnnotatedGtBox?: boolean;
  classes?: Record<string, ClassOverride>;
}

export interface PseudoResult {
  label: BoundLabel;
  quality: number;
  deltaZ: number;
}

export interface AugmentStats {
  gtLabels: number;
  candidates: number;
  retained: number;
  dropped: number;
  skipped: number;
}

export interface AugmentedFrame {
  /** augmented label file content, byte-identical to the CLI's output */
  text: string;
  stats: AugmentStats;
}
