"""Dataset ingestion, emission, and deterministic synthetic motion generation.

File layout (one file per dataset):

    participant,activity,frame,Head_x,Head_y,Head_z,...,EffectorLToe_z

fixed 87-column CSV, one row per frame, UTF-8, LF line endings, coordinates
as decimal text with 9 significant digits. Rows of a (participant, activity)
sequence are contiguous and frame-ordered. A file with only the header is an
empty dataset.

The synthetic generator builds each activity class from a parametric
skeleton: a base posture (pelvis height, torso/head pitch, arm and leg
angles) plus, for the dynamic classes, a sinusoidal gait phase and a
constant per-frame hip translation. Per-joint isotropic Gaussian noise is
added on top. All randomness flows from a 64-bit seed through per-sequence
substreams keyed by (seed, participant, activity), so generation is
reproducible and order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .skeleton import (
    DYNAMIC_LABELS,
    N_JOINTS,
    ActivityClass,
    ActivitySequence,
    JointId,
    SkeletonFrame,
    validate_sequence,
)

PRNG_ALGORITHM = "numpy-pcg64"

# Per-frame hip speed ranges (meters/frame) for the dynamic classes.
# Walking is slowest; texting-while-walking and carrying share a band;
# running is fastest.
DEFAULT_GAIT_SPEED_RANGES: dict[int, tuple[float, float]] = {
    5: (0.018, 0.022),
    6: (0.028, 0.032),
    7: (0.028, 0.032),
    8: (0.034, 0.040),
    9: (0.055, 0.065),
}

_GAIT_PHASE_RATES = {5: 2 * math.pi / 24, 6: 2 * math.pi / 24,
                     7: 2 * math.pi / 24, 8: 2 * math.pi / 24,
                     9: 2 * math.pi / 14}


class DatasetFormatError(ValueError):
    """Raised when a dataset file violates the documented layout."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class FileIngest:
    path: str


@dataclass(frozen=True)
class Synthetic:
    seed: int
    algorithm: str = PRNG_ALGORITHM


@dataclass(frozen=True)
class DatasetManifest:
    """A set of activity sequences plus where they came from."""

    sequences: tuple[ActivitySequence, ...]
    source: FileIngest | Synthetic

    def __post_init__(self):
        object.__setattr__(self, "sequences", tuple(self.sequences))
        keys = [(s.participant_id, s.activity.label) for s in self.sequences]
        if len(set(keys)) != len(keys):
            dupes = sorted({k for k in keys if keys.count(k) > 1})
            raise ValueError(f"duplicate (participant, activity) pairs: {dupes}")

    @property
    def manifest_id(self) -> str:
        if isinstance(self.source, Synthetic):
            return f"synthetic:{self.source.algorithm}:seed={self.source.seed}"
        return f"file:{self.source.path}"

    def __len__(self) -> int:
        return len(self.sequences)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of the synthetic motion generator."""

    n_participants: int = 16
    frames_per_sequence: int = 60
    noise_sigma: float = 0.01
    seed: int = 0
    gait_speed_range: dict[int, tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_GAIT_SPEED_RANGES)
    )

    def __post_init__(self):
        if self.n_participants < 1:
            raise ValueError("n_participants must be >= 1")
        if self.frames_per_sequence < 51:
            raise ValueError("frames_per_sequence must be >= 51")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if set(self.gait_speed_range) != set(DYNAMIC_LABELS):
            raise ValueError(
                f"gait_speed_range must cover exactly the dynamic classes {DYNAMIC_LABELS}"
            )
        for label, (lo, hi) in self.gait_speed_range.items():
            if not 0 < lo <= hi:
                raise ValueError(f"invalid speed range for class {label}: ({lo}, {hi})")


# ---------------------------------------------------------------------------
# CSV layout
# ---------------------------------------------------------------------------

def csv_columns() -> list[str]:
    """The 87 column names, in canonical order."""
    cols = ["participant", "activity", "frame"]
    for joint in JointId:
        for axis in ("x", "y", "z"):
            cols.append(f"{joint.name}_{axis}")
    return cols


_HEADER = ",".join(csv_columns())
_N_COLS = 3 + 3 * N_JOINTS


def _format_coord(v: float) -> str:
    return f"{v:.9g}"


def write_dataset(manifest: DatasetManifest, path: str | Path) -> None:
    """Serialize a manifest to the documented CSV layout.

    Coordinates are written with 9 significant digits; a value that survives
    that quantization round-trips bit-exactly through read_dataset.
    """
    path = Path(path)
    lines = [_HEADER]
    for seq in manifest.sequences:
        for frame in seq.frames:
            coords = ",".join(_format_coord(v) for v in frame.positions.ravel())
            lines.append(
                f"{seq.participant_id},{seq.activity.label},{frame.frame_index},{coords}"
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_dataset(path: str | Path) -> DatasetManifest:
    """Parse a dataset file, failing with a located error on any defect.

    Every sequence must pass validate_sequence; the first violation aborts
    the read and names the offending line.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise DatasetFormatError("empty file: missing header")

    header_fields = lines[0].split(",")
    expected_fields = csv_columns()
    if header_fields != expected_fields:
        if len(header_fields) != len(expected_fields):
            raise DatasetFormatError(
                f"header has {len(header_fields)} columns, expected {_N_COLS}", line=1
            )
        bad = next(
            (got, want)
            for got, want in zip(header_fields, expected_fields)
            if got != want
        )
        raise DatasetFormatError(
            f"unknown column {bad[0]!r} where {bad[1]!r} was expected", line=1
        )

    sequences: list[ActivitySequence] = []
    seen_keys: set[tuple[int, int]] = set()
    current_key: tuple[int, int] | None = None
    current_frames: list[SkeletonFrame] = []
    current_lines: list[int] = []

    def _close_current():
        nonlocal current_key, current_frames, current_lines
        if current_key is None:
            return
        participant, label = current_key
        seq = ActivitySequence(participant, ActivityClass(label), tuple(current_frames))
        result = validate_sequence(seq)
        if not result.ok:
            v = result.violations[0]
            line_no = None
            if v.frame_index is not None:
                for ln, fr in zip(current_lines, current_frames):
                    if fr.frame_index == v.frame_index:
                        line_no = ln
                        break
            raise DatasetFormatError(
                f"sequence (participant={participant}, activity={label}): {v.message}",
                line=line_no,
            )
        sequences.append(seq)
        current_key = None
        current_frames = []
        current_lines = []

    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != _N_COLS:
            raise DatasetFormatError(
                f"row has {len(fields)} fields, expected {_N_COLS}", line=line_no
            )
        try:
            participant = int(fields[0])
            label = int(fields[1])
            frame_index = int(fields[2])
        except ValueError as exc:
            raise DatasetFormatError(f"malformed row key: {exc}", line=line_no) from exc
        try:
            coords = np.array([float(v) for v in fields[3:]], dtype=np.float64)
        except ValueError as exc:
            raise DatasetFormatError(f"malformed coordinate: {exc}", line=line_no) from exc

        key = (participant, label)
        if key != current_key:
            _close_current()
            if key in seen_keys:
                raise DatasetFormatError(
                    f"rows for (participant={participant}, activity={label}) are not contiguous",
                    line=line_no,
                )
            seen_keys.add(key)
            current_key = key
        try:
            frame = SkeletonFrame(frame_index, coords.reshape(N_JOINTS, 3))
        except ValueError as exc:
            raise DatasetFormatError(str(exc), line=line_no) from exc
        current_frames.append(frame)
        current_lines.append(line_no)

    _close_current()
    return DatasetManifest(tuple(sequences), FileIngest(str(path)))


# ---------------------------------------------------------------------------
# Parametric pose model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _PoseParams:
    pelvis_height: float
    torso_pitch: float  # rad, positive leans toward +z
    head_pitch: float  # rad, positive looks down
    r_shoulder: float  # rad, positive swings the arm forward (+z)
    l_shoulder: float
    r_elbow: float  # rad, additional forward bend at the elbow
    l_elbow: float
    r_hip: float  # rad, positive swings the leg forward (+z)
    l_hip: float
    r_knee: float  # rad, positive pulls the heel backward
    l_knee: float
    lying: bool = False


def _pitch_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _sagittal(theta: float) -> np.ndarray:
    """Unit vector in the y-z plane, theta radians forward of straight down."""
    return np.array([0.0, -math.cos(theta), math.sin(theta)])


def _build_pose(p: _PoseParams) -> np.ndarray:
    out = np.zeros((N_JOINTS, 3))
    pelvis = np.array([0.0, p.pelvis_height, 0.0])
    torso_up = np.array([0.0, math.cos(p.torso_pitch), math.sin(p.torso_pitch)])

    hip = pelvis
    lower = hip + 0.10 * torso_up
    middle = lower + 0.15 * torso_up
    chest = middle + 0.15 * torso_up
    neck = chest + 0.15 * torso_up
    head_up = _pitch_matrix(p.torso_pitch + p.head_pitch) @ np.array([0.0, 1.0, 0.0])
    head = neck + 0.15 * head_up
    eff_head = head + 0.10 * head_up
    eye = head + _pitch_matrix(p.torso_pitch + p.head_pitch) @ np.array([0.03, 0.02, 0.08])

    out[JointId.Hip] = hip
    out[JointId.LowerSpine] = lower
    out[JointId.MiddleSpine] = middle
    out[JointId.Chest] = chest
    out[JointId.Neck] = neck
    out[JointId.Head] = head
    out[JointId.EffectorHead] = eff_head
    out[JointId.REye] = eye

    com = hip + 0.35 * (chest - hip)
    out[JointId.CenterOfMass] = com
    out[JointId.CenterOfMassGroundProjection] = np.array([com[0], 0.0, com[2]])

    for side, shoulder_pitch, elbow_bend, clav_id, sh_id, fore_id, hand_id in (
        (+1.0, p.r_shoulder, p.r_elbow, JointId.RClavicle, JointId.RShoulder,
         JointId.RForearm, JointId.RHand),
        (-1.0, p.l_shoulder, p.l_elbow, JointId.LClavicle, JointId.LShoulder,
         JointId.LForearm, JointId.LHand),
    ):
        clavicle = neck + np.array([side * 0.07, -0.02, 0.0])
        shoulder = neck + np.array([side * 0.19, -0.05, 0.0])
        elbow = shoulder + 0.28 * _sagittal(shoulder_pitch)
        hand = elbow + 0.26 * _sagittal(shoulder_pitch + elbow_bend)
        out[clav_id] = clavicle
        out[sh_id] = shoulder
        out[fore_id] = elbow
        out[hand_id] = hand

    for side, hip_pitch, knee_bend, thigh_id, shin_id, foot_id, toe_id, eff_id in (
        (+1.0, p.r_hip, p.r_knee, JointId.RThigh, JointId.RShin, JointId.RFoot,
         JointId.RToe, JointId.EffectorRToe),
        (-1.0, p.l_hip, p.l_knee, JointId.LThigh, JointId.LShin, JointId.LFoot,
         JointId.LToe, JointId.EffectorLToe),
    ):
        thigh = pelvis + np.array([side * 0.09, -0.02, 0.0])
        knee = thigh + 0.44 * _sagittal(hip_pitch)
        ankle = knee + 0.42 * _sagittal(hip_pitch - knee_bend)
        toe = ankle + np.array([0.0, -0.05, 0.13])
        eff = toe + np.array([0.0, -0.01, 0.05])
        out[thigh_id] = thigh
        out[shin_id] = knee
        out[foot_id] = ankle
        out[toe_id] = toe
        out[eff_id] = eff

    if p.lying:
        # Rotate upright pose onto a couch surface: body axis along +x.
        rotated = np.empty_like(out)
        rotated[:, 0] = out[:, 1]
        rotated[:, 1] = 0.45 - out[:, 0]
        rotated[:, 2] = out[:, 2]
        out = rotated
    return out


def _swing(base: float, amplitude: float, phase: float) -> float:
    return base + amplitude * max(0.0, math.sin(phase))


def class_template(label: int, phase: float = 0.0) -> np.ndarray:
    """The noiseless (28, 3) posture of an activity class at a gait phase.

    Stationary classes ignore phase. This is the template the generator
    scales, rotates, and translates per sequence.
    """
    s = math.sin(phase)
    if label == 1:  # sitting on office chair, hands at keyboard
        p = _PoseParams(0.55, -0.08, 0.05, 0.55, 0.55, 0.95, 0.95,
                        1.45, 1.45, 1.40, 1.40)
    elif label == 2:  # standing, phone held high in the right hand
        p = _PoseParams(1.00, 0.03, 0.62, 0.62, 0.30, 1.65, 0.80,
                        0.00, 0.00, 0.03, 0.03)
    elif label == 3:  # sitting on a stool, leaning forward, hands on thighs
        p = _PoseParams(0.70, 0.18, 0.15, 0.35, 0.35, 0.55, 0.55,
                        1.10, 1.10, 1.45, 1.45)
    elif label == 4:  # lying on a couch, arms folded
        p = _PoseParams(0.0, 0.0, 0.10, 0.90, 0.90, 1.90, 1.90,
                        0.35, 0.35, 0.50, 0.50, lying=True)
    elif label == 5:  # walking, arms counter-swinging
        p = _PoseParams(1.00, 0.06, 0.0, -0.40 * s, 0.40 * s, 0.20, 0.20,
                        0.45 * s, -0.45 * s,
                        _swing(0.10, 0.45, phase), _swing(0.10, 0.45, phase + math.pi))
    elif label == 6:  # walking, both hands texting at chest height
        p = _PoseParams(1.00, 0.03, 0.62, 0.40, 0.40, 1.55, 1.55,
                        0.45 * s, -0.45 * s,
                        _swing(0.10, 0.45, phase), _swing(0.10, 0.45, phase + math.pi))
    elif label == 7:  # carrying a box in front, arms nearly straight
        p = _PoseParams(1.00, -0.08, 0.0, 1.05, 1.05, 0.25, 0.25,
                        0.32 * s, -0.32 * s,
                        _swing(0.10, 0.32, phase), _swing(0.10, 0.32, phase + math.pi))
    elif label == 8:  # pulling an object trailing behind the right arm
        p = _PoseParams(1.00, 0.30, 0.05, -0.75, 0.25 * s, 0.15, 0.25,
                        0.38 * s, -0.38 * s,
                        _swing(0.10, 0.40, phase), _swing(0.10, 0.40, phase + math.pi))
    elif label == 9:  # running: long stride, high heels, bent arms
        p = _PoseParams(0.98 + 0.02 * math.sin(2 * phase), 0.12, 0.0,
                        -0.55 * s, 0.55 * s, 1.15, 1.15,
                        0.80 * s, -0.80 * s,
                        _swing(0.15, 0.85, phase), _swing(0.15, 0.85, phase + math.pi))
    else:
        raise ValueError(f"activity label must be in 1..9, got {label}")
    return _build_pose(p)


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

def _yaw_matrix(yaw: float) -> np.ndarray:
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _quantize_sig9(a: np.ndarray) -> np.ndarray:
    """Round every value to 9 significant decimal digits (the file precision)."""
    flat = np.array([float(f"{v:.9g}") for v in a.ravel()], dtype=np.float64)
    return flat.reshape(a.shape)


def _generate_sequence(spec: SynthSpec, participant: int, label: int) -> ActivitySequence:
    rng = np.random.default_rng([spec.seed, participant, label])
    scale = rng.uniform(0.92, 1.08)
    yaw = rng.uniform(-0.35, 0.35)
    home = np.array([rng.uniform(-1.0, 1.0), 0.0, rng.uniform(2.0, 4.0)])
    phase0 = rng.uniform(0.0, 2 * math.pi)
    dynamic = label in DYNAMIC_LABELS
    speed = rng.uniform(*spec.gait_speed_range[label]) if dynamic else 0.0
    rate = _GAIT_PHASE_RATES.get(label, 0.0)

    n = spec.frames_per_sequence
    rot = _yaw_matrix(yaw)
    heading = rot @ np.array([0.0, 0.0, 1.0])
    noise = rng.normal(0.0, spec.noise_sigma, size=(n, N_JOINTS, 3))

    positions = np.empty((n, N_JOINTS, 3))
    for t in range(n):
        pose = class_template(label, phase0 + rate * t)
        pose = (scale * pose) @ rot.T
        walk = (t - (n - 1) / 2.0) * speed * heading
        positions[t] = pose + home + walk
    positions = _quantize_sig9(positions + noise)

    frames = tuple(SkeletonFrame(t, positions[t]) for t in range(n))
    return ActivitySequence(participant, ActivityClass(label), frames)


def generate_synthetic(spec: SynthSpec) -> DatasetManifest:
    """Generate a deterministic synthetic dataset from a SynthSpec.

    Every (participant, activity) pair gets its own sequence. Coordinates
    are pre-quantized to the file precision so the manifest round-trips
    bit-exactly through write_dataset / read_dataset.
    """
    sequences = [
        _generate_sequence(spec, participant, label)
        for participant in range(1, spec.n_participants + 1)
        for label in range(1, 10)
    ]
    return DatasetManifest(tuple(sequences), Synthetic(spec.seed))


def generate_depth_pair(
    seed: int,
    n_participants: int = 8,
    frames_per_sequence: int = 60,
    noise_sigma: float = 0.01,
    depth_offset: float = 0.35,
) -> DatasetManifest:
    """Diagnostic two-class fixture whose classes differ only in depth.

    Both classes share the standing posture; class 2 shifts the hands and
    forearms by depth_offset along z. The x and y coordinates are therefore
    class-independent, so any classifier restricted to a 2D (x, y)
    projection sees no signal while the 3D features separate cleanly.
    """
    base = class_template(2, 0.0)
    shifted = base.copy()
    for j in (JointId.RForearm, JointId.RHand, JointId.LForearm, JointId.LHand):
        shifted[j, 2] += depth_offset

    sequences = []
    for participant in range(1, n_participants + 1):
        for label, template in ((1, base), (2, shifted)):
            rng = np.random.default_rng([seed, participant, label])
            home = np.array([rng.uniform(-1.0, 1.0), 0.0, rng.uniform(2.0, 4.0)])
            noise = rng.normal(0.0, noise_sigma, size=(frames_per_sequence, N_JOINTS, 3))
            positions = _quantize_sig9(template[None, :, :] + home + noise)
            frames = tuple(
                SkeletonFrame(t, positions[t]) for t in range(frames_per_sequence)
            )
            sequences.append(ActivitySequence(participant, ActivityClass(label), frames))
    return DatasetManifest(tuple(sequences), Synthetic(seed))
