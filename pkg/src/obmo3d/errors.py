"""Exception types shared across the toolkit."""


class Obmo3dError(Exception):
    """Base class for all toolkit errors."""


class ParseError(Obmo3dError):
    """A text file line could not be parsed.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class MissingCameraError(Obmo3dError):
    """A calibration file lacks the required camera entry (P2)."""


class InvalidIntrinsicsError(Obmo3dError):
    """Parsed projection parameters violate fx > 0, fy > 0."""


class BehindCameraError(Obmo3dError):
    """A point or box corner has non-positive depth and cannot be projected."""


class LabelSkipped(Obmo3dError):
    """A label cannot be augmented (e.g. behind the camera); callers skip it."""


class ContractViolation(Obmo3dError):
    """An input violates a documented contract (e.g. detection without score)."""


class UndefinedAPError(Obmo3dError):
    """Average precision is undefined because the ground-truth set is empty."""


class FrameSetMismatchError(Obmo3dError):
    """Detection and ground-truth directories do not cover the same frames."""

    def __init__(self, missing_in_det, missing_in_gt):
        self.missing_in_det = sorted(missing_in_det)
        self.missing_in_gt = sorted(missing_in_gt)
        parts = []
        if self.missing_in_det:
            parts.append(f"missing in detections: {', '.join(self.missing_in_det)}")
        if self.missing_in_gt:
            parts.append(f"missing in ground truth: {', '.join(self.missing_in_gt)}")
        super().__init__("; ".join(parts) or "frame sets differ")


class RecordError(Obmo3dError):
    """A structured record (JSON bridge) is malformed; carries the field name."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field '{field}': {message}")
        self.field = field
