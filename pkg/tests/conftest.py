import numpy as np
import pytest

from skelhar import (
    ActivityClass,
    ActivitySequence,
    DatasetManifest,
    SkeletonFrame,
    SynthSpec,
    Synthetic,
    generate_synthetic,
)


def grid_positions(shift=0.0):
    """A valid, asymmetric joint layout (Head != Neck, all finite)."""
    base = np.arange(28 * 3, dtype=np.float64).reshape(28, 3) * 0.013
    base[:, 1] += 1.0
    return base + shift


def make_frame(frame_index=0, shift=0.0):
    return SkeletonFrame(frame_index, grid_positions(shift))


def make_sequence(n_frames=51, participant=1, label=1, drift=0.0):
    frames = tuple(make_frame(i, shift=drift * i) for i in range(n_frames))
    return ActivitySequence(participant, ActivityClass(label), frames)


@pytest.fixture(scope="session")
def small_manifest() -> DatasetManifest:
    """2 participants x 9 activities x 55 frames, light noise."""
    return generate_synthetic(SynthSpec(n_participants=2, frames_per_sequence=55,
                                        noise_sigma=0.005, seed=3))


@pytest.fixture()
def two_sequence_manifest() -> DatasetManifest:
    seqs = (make_sequence(participant=1, label=1),
            make_sequence(participant=1, label=2, drift=0.001))
    return DatasetManifest(seqs, Synthetic(0))
