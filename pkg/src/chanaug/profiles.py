"""TDL and CDL power-delay(-angle) profiles and delay-spread scaling.

The numeric tables are the normalized Rel-15 profiles (families A..E).
NLOS lookups carry no K-factor; the LOS families (D, E) collapse the
specular first entry and its co-located diffuse cluster into a single
0 dB tap plus a Rician K, which reproduces the tabulated split to within
0.002 dB.  Taps are re-sorted by delay at lookup so the first delay is 0
and delays ascend.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, ValidationError

TDL_IDS = ("A", "B", "C", "D", "E")
CDL_IDS = ("A", "B", "C", "D", "E")


@dataclass
class TapProfile:
    """Power-delay profile: delays are unitless as tabulated, seconds once scaled."""

    delays: np.ndarray
    powers_db: np.ndarray
    rician_k_db: float | None = None
    los: bool = False
    scaled: bool = False  # True once delays are in seconds

    def __post_init__(self):
        self.delays = np.asarray(self.delays, dtype=np.float64)
        self.powers_db = np.asarray(self.powers_db, dtype=np.float64)
        if self.delays.shape != self.powers_db.shape or self.delays.size < 1:
            raise ValidationError("delays and powers_db must be equal-length, non-empty")
        if self.delays[0] != 0.0 or np.any(np.diff(self.delays) < 0):
            raise ValidationError("delays must ascend from 0")
        if self.los and self.rician_k_db is None:
            raise ValidationError("LOS profile requires a Rician K-factor")

    @property
    def num_taps(self) -> int:
        return self.delays.size


@dataclass
class ClusterProfile(TapProfile):
    """Tap profile plus per-cluster arrival azimuth (degrees)."""

    aoa_deg: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        self.aoa_deg = np.asarray(self.aoa_deg, dtype=np.float64)
        if self.aoa_deg.shape != self.delays.shape:
            raise ValidationError("aoa_deg must match the delay vector length")


# Normalized delays / per-tap powers, tabulated order (unsorted).
_TDL_TABLES = {
    "A": (
        [0.0000, 0.3819, 0.4025, 0.5868, 0.4610, 0.5375, 0.6708, 0.5750,
         0.7618, 1.5375, 1.8978, 2.2242, 2.1718, 2.4942, 2.5119, 3.0582,
         4.0810, 4.4579, 4.5695, 4.7966, 5.0066, 5.3043, 9.6586],
        [-13.4, 0.0, -2.2, -4.0, -6.0, -8.2, -9.9, -10.5, -7.5, -15.9, -6.6,
         -16.7, -12.4, -15.2, -10.8, -11.3, -12.7, -16.2, -18.3, -18.9,
         -16.6, -19.9, -29.7],
        None,
    ),
    "B": (
        [0.0000, 0.1072, 0.2155, 0.2095, 0.2870, 0.2986, 0.3752, 0.5055,
         0.3681, 0.3697, 0.5700, 0.5283, 1.1021, 1.2756, 1.5474, 1.7842,
         2.0169, 2.8294, 3.0219, 3.6187, 4.1067, 4.2790, 4.7834],
        [0.0, -2.2, -4.0, -3.2, -9.8, -1.2, -3.4, -5.2, -7.6, -3.0, -8.9,
         -9.0, -4.8, -5.7, -7.5, -1.9, -7.6, -12.2, -9.8, -11.4, -14.9,
         -9.2, -11.3],
        None,
    ),
    "C": (
        [0.0000, 0.2099, 0.2219, 0.2329, 0.2176, 0.6366, 0.6448, 0.6560,
         0.6584, 0.7935, 0.8213, 0.9336, 1.2285, 1.3083, 2.1704, 2.7105,
         4.2589, 4.6003, 5.4902, 5.6077, 6.3065, 6.6374, 7.0427, 8.6523],
        [-4.4, -1.2, -3.5, -5.2, -2.5, 0.0, -2.2, -3.9, -7.4, -7.1, -10.7,
         -11.1, -5.1, -6.8, -8.7, -13.2, -13.9, -13.9, -15.8, -17.1, -16.0,
         -15.7, -21.6, -22.8],
        None,
    ),
    "D": (
        [0.0, 0.035, 0.612, 1.363, 1.405, 1.804, 2.596, 1.775, 4.042,
         7.937, 9.424, 9.708, 12.525],
        [0.0, -18.8, -21.0, -22.8, -17.9, -20.1, -21.9, -22.9, -27.8,
         -23.6, -24.8, -30.0, -27.7],
        13.3,
    ),
    "E": (
        [0.0, 0.5133, 0.5440, 0.5630, 0.5440, 0.7112, 1.9092, 1.9293,
         1.9589, 2.6426, 3.7136, 5.4524, 12.0034, 20.6519],
        [0.0, -15.8, -18.1, -19.8, -22.9, -22.4, -18.6, -20.8, -22.6,
         -22.3, -25.6, -20.2, -29.8, -29.2],
        22.0,
    ),
}

# Cluster delays/powers match the TDL family they were reduced to; the last
# CDL-E cluster delay differs from TDL-E in the source tables (20.6419).
_CDL_AOA = {
    "A": [51.3, -152.7, -152.7, -152.7, 76.6, 76.6, 76.6, -1.8, -41.9, 94.2,
          51.9, -115.9, 26.6, 76.6, -7.0, -23.0, -47.2, 110.4, 144.5, 155.3,
          102.0, -151.8, 55.2],
    "B": [-173.3, -173.3, -173.3, 125.5, -88.0, 155.1, 155.1, 155.1, -89.8,
          132.1, -83.6, 95.3, 103.7, -87.8, -92.5, -139.1, -90.6, 58.6,
          -79.0, 65.8, 52.7, 88.7, -60.4],
    "C": [-101.0, 120.0, 120.0, 120.0, -127.5, 170.4, 170.4, 170.4, 55.4,
          66.5, -48.1, 46.9, 68.1, -68.7, 81.5, 30.7, -16.4, 3.8, -13.7,
          9.7, 5.6, 0.7, -21.9, 33.6],
    "D": [-180.0, 89.2, 89.2, 89.2, 163.0, 163.0, 163.0, -137.0, 74.5,
          127.7, -119.6, -9.1, -83.8],
    "E": [-180.0, 18.2, 18.2, 18.2, 101.8, 112.9, -155.5, -155.5, -155.5,
          -143.3, -94.7, 147.0, -36.2, -26.0],
}

_CDL_E_DELAYS = [0.0, 0.5133, 0.5440, 0.5630, 0.5440, 0.7112, 1.9092,
                 1.9293, 1.9589, 2.6426, 3.7136, 5.4524, 12.0034, 20.6419]


def tdl_profile(profile_id: str) -> TapProfile:
    """Look up a normalized TDL-A..E profile (taps sorted by delay)."""
    if profile_id not in _TDL_TABLES:
        raise ConfigError(f"unknown TDL profile id {profile_id!r} (expected one of {TDL_IDS})")
    delays, powers, k = _TDL_TABLES[profile_id]
    delays = np.asarray(delays)
    powers = np.asarray(powers)
    order = np.argsort(delays, kind="stable")
    return TapProfile(delays[order], powers[order], rician_k_db=k, los=k is not None)


def cdl_profile(profile_id: str) -> ClusterProfile:
    """Look up a normalized CDL-A..E cluster profile (clusters sorted by delay)."""
    if profile_id not in _CDL_AOA:
        raise ConfigError(f"unknown CDL profile id {profile_id!r} (expected one of {CDL_IDS})")
    delays, powers, k = _TDL_TABLES[profile_id]
    if profile_id == "E":
        delays = _CDL_E_DELAYS
    delays = np.asarray(delays)
    powers = np.asarray(powers)
    aoa = np.asarray(_CDL_AOA[profile_id])
    order = np.argsort(delays, kind="stable")
    return ClusterProfile(delays[order], powers[order], rician_k_db=k,
                          los=k is not None, aoa_deg=aoa[order])


def diffuse_powers_linear(profile: TapProfile) -> np.ndarray:
    """Per-tap diffuse (non-specular) linear powers.

    For LOS profiles the first tap's tabulated power covers both components;
    its diffuse share is total/(1+K).
    """
    p = 10.0 ** (profile.powers_db / 10.0)
    if profile.los:
        k_lin = 10.0 ** (profile.rician_k_db / 10.0)
        p = p.copy()
        p[0] /= 1.0 + k_lin
    return p


def rms_delay_spread(profile: TapProfile) -> float:
    """Power-weighted RMS delay spread (diffuse powers as weights)."""
    w = diffuse_powers_linear(profile)
    tau = profile.delays
    mean = np.sum(w * tau) / np.sum(w)
    return float(np.sqrt(np.sum(w * (tau - mean) ** 2) / np.sum(w)))


def scale_delays(profile: TapProfile, target_rms_ds_s: float) -> TapProfile:
    """Rescale delays so the profile's RMS delay spread equals the target (seconds).

    A target of 0 collapses every delay to 0 (flat channel).
    """
    if target_rms_ds_s < 0:
        raise ValidationError("target delay spread must be >= 0")
    ds = rms_delay_spread(profile)
    if target_rms_ds_s == 0.0 or ds == 0.0:
        scaled = np.zeros_like(profile.delays)
    else:
        scaled = profile.delays * (target_rms_ds_s / ds)
    return replace(profile, delays=scaled, scaled=True)


def normalize_profile_power(profile: TapProfile) -> TapProfile:
    """Shift tap powers so they sum to 1 in linear scale (0 dB total).

    The tabulated profiles are reference-relative (strongest tap 0 dB);
    emulation paths that must preserve signal energy apply this first.
    """
    total = np.sum(10.0 ** (profile.powers_db / 10.0))
    return replace(profile, powers_db=profile.powers_db - 10.0 * np.log10(total))
