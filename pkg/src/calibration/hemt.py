"""HEMT gain and noise-temperature calibration and referral of spectra to the HEMT input.

Two SA readings fix the two unknowns. A strong generator tone of known
power at the HEMT input gives the gain directly. A thermal-noise reading
with the input terminated at the dewar temperature then gives the total
noise temperature through ``S = k_B * T * b * G / IL``.

The post-HEMT loss enters both steps the same way, so any assumed value
cancels in the calibrated spectrum as long as it is used consistently.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

from scipy.constants import k as BOLTZMANN

from ..errors import DomainError, PlaneMismatchError, PreconditionError
from ..rfchain.chain import ChainConfig, ReferencePlane
from ..rfchain.spectrum import CalibratedSpectrum, RawSpectrum
from ..rfchain.units import db_to_linear, dbm_to_watts, watts_to_dbm
from .policies import (
    CABLE_POLICY,
    HP_GAIN_POLICY,
    CableDirection,
    ErrorPolicy,
    applied_power,
    apply_cable_policy,
    effective_hp_gain,
)

# Generator reading must exceed the thermal reading by this factor.
MIN_SIGNAL_TO_NOISE = 10.0
# Solved noise temperatures down to this far below zero are rounding.
T_NOISE_TOLERANCE_K = 1e-6

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThermalMeasurement:
    power_sa_w: float
    rbw_hz: float
    t_dewar_k: float


@dataclass(frozen=True)
class GeneratorMeasurement:
    p_generator_dbm: float
    il_pre_hemt_db: float
    power_sa_w: float


@dataclass(frozen=True)
class CalibrationSolution:
    """Solved HEMT parameters and the policy-adjusted quantities that go with them.

    ``effective_il_factors`` maps a path name (``post_hemt``, ``hp_path``) to
    the linear loss factor after the cable policy. ``p_applied_w`` is the
    source power at the HP load when known.
    """

    g_hemt_db: float
    t_hemt_noise_k: float
    il_post_hemt_db: float
    effective_g_hp_db: float
    effective_il_factors: Mapping[str, float] = field(default_factory=dict)
    p_applied_w: Optional[float] = None

    @property
    def g_hemt_lin(self) -> float:
        return db_to_linear(self.g_hemt_db)

    @property
    def il_post_lin(self) -> float:
        return db_to_linear(self.il_post_hemt_db)

    def to_dict(self) -> Dict[str, object]:
        return {
            "g_hemt_db": self.g_hemt_db,
            "t_hemt_noise_k": self.t_hemt_noise_k,
            "il_post_hemt_db": self.il_post_hemt_db,
            "effective_g_hp_db": self.effective_g_hp_db,
            "effective_il_factors": dict(self.effective_il_factors),
            "p_applied_w": self.p_applied_w,
        }


def simulate_thermal_measurement(cfg: ChainConfig) -> ThermalMeasurement:
    """SA reading of the terminated input at the calibration RBW."""
    total_t = cfg.t_dewar + cfg.t_hemt_noise
    power = BOLTZMANN * total_t * cfg.rbw_cal_hz * cfg.sa_over_hemt
    return ThermalMeasurement(power_sa_w=power, rbw_hz=cfg.rbw_cal_hz, t_dewar_k=cfg.t_dewar)


def simulate_generator_measurement(cfg: ChainConfig) -> GeneratorMeasurement:
    """SA reading of the generator tone, noise neglected."""
    p_sa_dbm = cfg.p_generator_dbm - cfg.il_pre_hemt_db + cfg.g_hemt_db - cfg.il_post_hemt_db
    return GeneratorMeasurement(
        p_generator_dbm=cfg.p_generator_dbm,
        il_pre_hemt_db=cfg.il_pre_hemt_db,
        power_sa_w=dbm_to_watts(p_sa_dbm),
    )


def solve_hemt_calibration(
    thermal_meas: ThermalMeasurement,
    gen_meas: GeneratorMeasurement,
    il_post_hemt_db: float,
    g_hp_amp_db: float = 60.73,
    g_hp_amp_sigma_db: float = 0.6,
    il_hp_path_db: float = 7.10,
    hp_policy: ErrorPolicy = HP_GAIN_POLICY,
    cable_policy: ErrorPolicy = CABLE_POLICY,
    p_applied_w: Optional[float] = None,
    p_hp_drive_dbm: Optional[float] = None,
) -> CalibrationSolution:
    """Solve the HEMT gain and noise temperature from two SA readings.

    Args:
        thermal_meas: Terminated-input reading at the SA, its RBW and the
            dewar temperature.
        gen_meas: Generator power, loss to the HEMT input and SA reading.
        il_post_hemt_db: Assumed loss between HEMT output and SA input.
        g_hp_amp_db: Nominal HP amplifier gain.
        g_hp_amp_sigma_db: One-sigma uncertainty of the HP gain.
        il_hp_path_db: Loss between HP amplifier output and HP load.
        hp_policy: Policy for the HP gain.
        cable_policy: Policy for cable losses.
        p_applied_w: Source power at the HP load, stored with the solution.
        p_hp_drive_dbm: HP amplifier drive. Without an explicit
            ``p_applied_w``, P_A is derived from it under both policies.

    Returns:
        CalibrationSolution with the solved gain and noise temperature.

    Raises:
        DomainError: If a reading is not positive.
        PreconditionError: If the generator reading is not at least ten times
            the thermal reading, or the thermal reading is below the dewar
            noise alone.
    """
    if thermal_meas.power_sa_w <= 0 or gen_meas.power_sa_w <= 0 or thermal_meas.rbw_hz <= 0:
        raise DomainError("SA readings and RBW must be positive")
    if gen_meas.power_sa_w < MIN_SIGNAL_TO_NOISE * thermal_meas.power_sa_w:
        raise PreconditionError(
            "generator reading is less than 10x the thermal reading; "
            "the noise contribution cannot be neglected"
        )

    p_in_dbm = gen_meas.p_generator_dbm - gen_meas.il_pre_hemt_db
    g_hemt_db = watts_to_dbm(gen_meas.power_sa_w) + il_post_hemt_db - p_in_dbm

    t_total = (
        thermal_meas.power_sa_w
        * db_to_linear(il_post_hemt_db)
        / (BOLTZMANN * thermal_meas.rbw_hz * db_to_linear(g_hemt_db))
    )
    t_noise = t_total - thermal_meas.t_dewar_k
    if t_noise < -T_NOISE_TOLERANCE_K:
        raise PreconditionError(
            f"thermal reading implies T_total={t_total:.4f} K below the dewar temperature"
        )

    if p_applied_w is None and p_hp_drive_dbm is not None:
        p_applied_w = applied_power(
            p_hp_drive_dbm, g_hp_amp_db, g_hp_amp_sigma_db, il_hp_path_db, hp_policy, cable_policy
        )

    solution = CalibrationSolution(
        g_hemt_db=g_hemt_db,
        t_hemt_noise_k=max(t_noise, 0.0),
        il_post_hemt_db=il_post_hemt_db,
        effective_g_hp_db=effective_hp_gain(g_hp_amp_db, g_hp_amp_sigma_db, hp_policy),
        effective_il_factors={
            "post_hemt": apply_cable_policy(il_post_hemt_db, cable_policy, CableDirection.TOWARD_PM),
            "hp_path": apply_cable_policy(il_hp_path_db, cable_policy, CableDirection.TOWARD_PA),
        },
        p_applied_w=p_applied_w,
    )
    logger.info(
        "Solved HEMT calibration: G=%.3f dB, T_noise=%.3f K (IL_post=%.2f dB)",
        solution.g_hemt_db,
        solution.t_hemt_noise_k,
        il_post_hemt_db,
    )
    return solution


def solution_for_chain(cfg: ChainConfig, g_hp_amp_sigma_db: float = 0.6) -> CalibrationSolution:
    """Calibrate a simulated chain from its own forward-modelled readings."""
    return solve_hemt_calibration(
        simulate_thermal_measurement(cfg),
        simulate_generator_measurement(cfg),
        cfg.il_post_hemt_db,
        g_hp_amp_db=cfg.g_hp_amp_db,
        g_hp_amp_sigma_db=g_hp_amp_sigma_db,
        il_hp_path_db=cfg.il_hp_path_db,
        p_hp_drive_dbm=cfg.p_hp_drive_dbm,
    )


def calibrate_spectrum(
    raw: RawSpectrum,
    sol: CalibrationSolution,
    cable_policy: Optional[ErrorPolicy] = None,
) -> CalibratedSpectrum:
    """Refer an SA-plane spectrum to the HEMT input.

    With ``cable_policy`` the post-HEMT loss is increased on the data side
    only, which raises every calibrated power; the default keeps the loss
    that was used in the solve so that it cancels.

    Raises:
        PlaneMismatchError: If ``raw`` is not at the SA input.
    """
    if raw.reference_plane is not ReferencePlane.SA_INPUT:
        raise PlaneMismatchError(f"expected an sa_input spectrum, got {raw.reference_plane.value}")
    if cable_policy is None:
        il_lin = sol.il_post_lin
    else:
        il_lin = apply_cable_policy(sol.il_post_hemt_db, cable_policy, CableDirection.TOWARD_PM)
    return CalibratedSpectrum(
        f_start_hz=raw.f_start_hz,
        bin_hz=raw.bin_hz,
        bins=raw.bins * il_lin / sol.g_hemt_lin,
        reference_plane=ReferencePlane.HEMT_INPUT,
        rbw_hz=raw.rbw_hz,
        switch_state=raw.switch_state,
        seed=raw.seed,
        bit=raw.bit,
        epsilon=raw.epsilon,
        warnings=raw.warnings,
    )
