"""Waveform-aware TDL/CDL channel augmentation for RF fingerprinting."""

from .augment import (AugmentationPlan, AugmentationPolicy, Transform,
                      augment_dataset, augment_recording, select_transform)
from .bank import default_bank, load_bank, save_bank
from .channel import (ChannelConfig, FadingRealization, add_awgn, apply_channel,
                      fractional_delay, gen_fading)
from .classifier import (EvalReport, TrainedModel, evaluate, export_features,
                         gradient_check, load_model, save_model, train)
from .dataset import (DatasetManifest, Day, Example, ManifestHeader,
                      ManifestRecord, Provenance, RecordingMeta, WaveformKind,
                      read_manifest, slice_examples, write_manifest)
from .errors import (ChanAugError, ConfigError, DegenerateInputError,
                     FormatError, ParseError, ValidationError)
from .estimators import ChannelTransform, FingerprintTransform, WindowClassifier
from .experiment import (DayConditions, ExperimentConfig, ResultTable,
                         load_examples, run_experiment, synth_dataset)
from .impairments import (TransmitterFingerprint, apply_cfo_phase_noise,
                          apply_dc_offset, apply_fingerprint,
                          apply_iq_imbalance, apply_pa)
from .iqio import IqBuffer, normalize_power, read_iq_bin, write_iq_bin
from .net import NetConfig
from .profiles import (ClusterProfile, TapProfile, cdl_profile,
                       normalize_profile_power, rms_delay_spread, scale_delays,
                       tdl_profile)
from .wavegen import WaveformSpec, default_spec, gen_burst

__version__ = "0.1.0"
