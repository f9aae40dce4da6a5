"""Heart-rate estimation with the spectral-zoom chirp-z transform."""

from czthr._core import (
    BaselineWander,
    DatasetSpec,
    DeepCztModel,
    HrProfile,
    SensorModel,
    SynthSpec,
    __version__,
    czt_spectrum,
    default_harmonics,
    derive_seed,
    emd_loss,
    estimate_bpm,
    fft_spectrum,
    load_checkpoint,
    make_model,
    metrics,
    save_checkpoint,
    smo_loss,
    synth_dataset,
    synth_signal,
    train_model,
)

__all__ = [
    "BaselineWander",
    "DatasetSpec",
    "DeepCztModel",
    "HrProfile",
    "SensorModel",
    "SynthSpec",
    "__version__",
    "czt_spectrum",
    "default_harmonics",
    "derive_seed",
    "emd_loss",
    "estimate_bpm",
    "fft_spectrum",
    "load_checkpoint",
    "make_model",
    "metrics",
    "save_checkpoint",
    "smo_loss",
    "synth_dataset",
    "synth_signal",
    "train_model",
]
