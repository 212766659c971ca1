"""Conservative error policies for cable losses and the HP amplifier gain.

Cable losses measured at room temperature carry a 10% one-sided systematic
error that is always applied in the direction that weakens the limit: a
larger post-HEMT loss raises P_M, a larger HP-path loss lowers P_A. The HP
amplifier gain is taken one standard deviation low.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Union

from ..errors import DomainError
from ..rfchain.units import db_to_linear, dbm_to_watts

logger = logging.getLogger(__name__)


class Sidedness(str, Enum):
    ONE_SIDED_CONSERVATIVE = "one_sided_conservative"


class PolicyApplication(str, Enum):
    INCREASE_PM = "increase_PM"
    DECREASE_PA = "decrease_PA"
    DECREASE_GAIN = "decrease_gain"


class CableDirection(str, Enum):
    TOWARD_PM = "toward_PM"
    TOWARD_PA = "toward_PA"


@dataclass(frozen=True)
class ErrorPolicy:
    relative_error: float = 0.10
    sidedness: Sidedness = Sidedness.ONE_SIDED_CONSERVATIVE
    application: PolicyApplication = PolicyApplication.INCREASE_PM

    def __post_init__(self):
        if self.relative_error < 0:
            raise DomainError("relative_error must be >= 0")


CABLE_POLICY = ErrorPolicy(relative_error=0.10, application=PolicyApplication.INCREASE_PM)
HP_GAIN_POLICY = ErrorPolicy(relative_error=0.0, application=PolicyApplication.DECREASE_GAIN)

_CABLE_APPLICATIONS = (PolicyApplication.INCREASE_PM, PolicyApplication.DECREASE_PA)


def effective_hp_gain(nominal_db: float, sigma_db: float, policy: ErrorPolicy = HP_GAIN_POLICY) -> float:
    """Return the HP amplifier gain used for P_A.

    The gain is lowered by ``sigma_db``, inflated by the policy's relative
    error; the default policy gives nominal minus one sigma.
    """
    if sigma_db < 0:
        raise DomainError("sigma_db must be >= 0")
    if policy.application is not PolicyApplication.DECREASE_GAIN:
        raise DomainError(f"HP gain needs a {PolicyApplication.DECREASE_GAIN.value} policy")
    return nominal_db - sigma_db * (1.0 + policy.relative_error)


def apply_cable_policy(
    loss_db: float,
    policy: ErrorPolicy = CABLE_POLICY,
    direction: Union[CableDirection, str] = CableDirection.TOWARD_PM,
) -> float:
    """Return the linear power loss factor after the one-sided increase.

    Both conservative directions mean a larger loss. The data side multiplies
    SA readings by the factor (raising P_M); the HP path divides the amplifier
    output by it (lowering P_A).
    """
    direction = CableDirection(direction)
    if loss_db < 0:
        raise DomainError("loss_db must be >= 0")
    if policy.application not in _CABLE_APPLICATIONS:
        raise DomainError(f"{policy.application.value} is not a cable loss policy")
    adjusted_db = loss_db * (1.0 + policy.relative_error)
    logger.debug("Cable loss %s: %.3f dB -> %.3f dB", direction.value, loss_db, adjusted_db)
    return db_to_linear(adjusted_db)


def applied_power(
    p_source_dbm: float,
    g_hp_db: float,
    g_hp_sigma_db: float,
    il_hp_path_db: float,
    hp_policy: ErrorPolicy = HP_GAIN_POLICY,
    cable_policy: ErrorPolicy = CABLE_POLICY,
) -> float:
    """Power P_A in watts delivered to the HP load under both conservative policies."""
    gain_db = effective_hp_gain(g_hp_db, g_hp_sigma_db, hp_policy)
    loss = apply_cable_policy(il_hp_path_db, cable_policy, CableDirection.TOWARD_PA)
    return dbm_to_watts(p_source_dbm + gain_db) / loss
