"""Canonical domain types for skeleton streams: joints, frames, sequences, labels.

The joint taxonomy is the 28-joint skeleton emitted by RGB-D body trackers,
indexed in a fixed canonical order. All downstream code (file layout, feature
layout) derives column order from :class:`JointId`, so the enum order is part
of the on-disk contract and must never be reordered.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

# Coordinate-modality extraction consumes a window of this many source poses;
# velocity/acceleration are derived by differencing inside the window.
MIN_SOURCE_FRAMES = 51

N_JOINTS = 28
N_CLASSES = 9


class JointId(enum.IntEnum):
    """The 28 tracked body joints, in canonical index order.

    Head (0) and Neck (1) are the reference pair for posture normalization.
    """

    Head = 0
    Neck = 1
    Chest = 2
    MiddleSpine = 3
    LowerSpine = 4
    Hip = 5
    CenterOfMass = 6
    CenterOfMassGroundProjection = 7
    REye = 8
    EffectorHead = 9
    RClavicle = 10
    RShoulder = 11
    RForearm = 12
    RHand = 13
    LClavicle = 14
    LShoulder = 15
    LForearm = 16
    LHand = 17
    RThigh = 18
    RShin = 19
    RFoot = 20
    RToe = 21
    EffectorRToe = 22
    LThigh = 23
    LShin = 24
    LFoot = 25
    LToe = 26
    EffectorLToe = 27


class ActivityKind(enum.Enum):
    STATIONARY = "stationary"
    DYNAMIC = "dynamic"


_ACTIVITY_NAMES = {
    1: "sitting on office chair",
    2: "standing and texting",
    3: "sitting on stool",
    4: "lying on couch",
    5: "walking",
    6: "walking and texting",
    7: "carrying objects",
    8: "pulling object",
    9: "running",
}

STATIONARY_LABELS = (1, 2, 3, 4)
DYNAMIC_LABELS = (5, 6, 7, 8, 9)


@dataclass(frozen=True, order=True)
class ActivityClass:
    """One of the nine activity classes, labeled 1..9.

    Classes 1-4 are stationary postures, classes 5-9 are dynamic
    (locomotion) activities.
    """

    label: int

    def __post_init__(self):
        if self.label not in _ACTIVITY_NAMES:
            raise ValueError(f"activity label must be in 1..9, got {self.label}")

    @property
    def name(self) -> str:
        return _ACTIVITY_NAMES[self.label]

    @property
    def kind(self) -> ActivityKind:
        return ActivityKind.STATIONARY if self.label <= 4 else ActivityKind.DYNAMIC


@dataclass(frozen=True)
class SkeletonFrame:
    """One timestamped posture: 28 joint positions in the sensor frame.

    positions is a read-only (28, 3) float64 array of (x, y, z) in meters.
    Finiteness and the Head != Neck requirement are *reported* by
    validate_sequence rather than enforced here, so that malformed data can
    be represented long enough to be diagnosed.
    """

    frame_index: int
    positions: np.ndarray

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValueError(f"frame_index must be non-negative, got {self.frame_index}")
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.shape != (N_JOINTS, 3):
            raise ValueError(f"positions must have shape ({N_JOINTS}, 3), got {pos.shape}")
        pos = pos.copy()
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    def joint(self, joint: JointId) -> np.ndarray:
        return self.positions[int(joint)]


@dataclass(frozen=True)
class ActivitySequence:
    """Ordered frames for one (participant, activity) pair."""

    participant_id: int
    activity: ActivityClass
    frames: tuple[SkeletonFrame, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.participant_id < 1:
            raise ValueError(f"participant_id must be >= 1, got {self.participant_id}")
        object.__setattr__(self, "frames", tuple(self.frames))

    def __len__(self) -> int:
        return len(self.frames)

    def positions_array(self) -> np.ndarray:
        """Stack frame positions into a (n_frames, 28, 3) array."""
        return np.stack([f.positions for f in self.frames])


@dataclass(frozen=True)
class Violation:
    """One violated invariant, located at a frame when applicable."""

    frame_index: int | None
    message: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_sequence(seq: ActivitySequence) -> ValidationResult:
    """Check every sequence invariant and report all violations found.

    Violations are data, not faults: the function never raises on bad
    content. Checks, per frame where applicable:

    * frame_index strictly increasing across the sequence
    * at least MIN_SOURCE_FRAMES frames (coordinate-window requirement)
    * all coordinates finite
    * Head and Neck positions distinct (the normalization reference pair)
    """
    violations: list[Violation] = []

    if len(seq.frames) < MIN_SOURCE_FRAMES:
        violations.append(
            Violation(
                None,
                f"sequence has {len(seq.frames)} frames; "
                f"at least {MIN_SOURCE_FRAMES} are required for feature extraction",
            )
        )

    prev_index: int | None = None
    for frame in seq.frames:
        if prev_index is not None and frame.frame_index <= prev_index:
            violations.append(
                Violation(
                    frame.frame_index,
                    f"frame_index {frame.frame_index} not greater than predecessor {prev_index}",
                )
            )
        prev_index = frame.frame_index

        bad = ~np.isfinite(frame.positions)
        if bad.any():
            joints = sorted({JointId(int(j)).name for j in np.nonzero(bad)[0]})
            violations.append(
                Violation(
                    frame.frame_index,
                    f"non-finite coordinate at joint(s) {', '.join(joints)}",
                )
            )
        else:
            head = frame.positions[JointId.Head]
            neck = frame.positions[JointId.Neck]
            if math.sqrt(float(np.sum((neck - head) ** 2))) == 0.0:
                violations.append(
                    Violation(frame.frame_index, "Head and Neck positions coincide")
                )

    return ValidationResult(tuple(violations))
