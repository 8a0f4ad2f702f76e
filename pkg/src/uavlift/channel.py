"""Free-space channel math: path loss, rate, minimum power, lifetime.

Everything here is linear scale (watts, joules, meters); nothing is in dB.
The one modelling constant that matters downstream is the system constant
K: the minimum transmit power to sustain the common rate at distance d is
K*d^2, and the transmission lifetime of a device with energy E is then
E/(K*d^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, ValidationError
from .scenario import RfParams

# Exact SI value. The bundled reproduction cases pass c=3e8 instead, which
# is the rounding their published numbers are consistent with.
SPEED_OF_LIGHT = 299_792_458.0

# 2^x overflows a double near x = 1024; refuse well before that.
_MAX_RATE_EXPONENT = 1000.0


@dataclass(frozen=True)
class SystemConstant:
    """K in watts per square meter, with the inputs it was derived from.

    K = (2^(rate*user_count/bandwidth) - 1) * noise * (4*pi*frequency/c)^2
    """

    k: float
    rate: float
    user_count: int
    bandwidth: float
    noise: float
    frequency: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not self.k > 0:
            raise ValidationError(f"system constant must be positive, got {self.k}")
        expected = _system_constant_value(
            self.rate, self.user_count, self.bandwidth, self.noise, self.frequency, self.c
        )
        if not math.isclose(self.k, expected, rel_tol=1e-9):
            raise ValidationError(
                f"system constant {self.k} does not match its inputs (expected {expected})"
            )


def path_loss(distance: float, frequency: float, c: float = SPEED_OF_LIGHT) -> float:
    """Free-space loss factor (4*pi*distance*frequency/c)^2, dimensionless."""
    if not distance > 0:
        raise ValidationError(f"distance must be positive, got {distance}")
    if not frequency > 0:
        raise ValidationError(f"frequency must be positive, got {frequency}")
    return (4.0 * math.pi * distance * frequency / c) ** 2


def rate(bandwidth_per_user: float, power: float, loss: float, noise: float) -> float:
    """Achievable uplink rate bandwidth_per_user * log2(1 + (power/loss)/noise) in bits/s."""
    for name, value in (
        ("bandwidth_per_user", bandwidth_per_user),
        ("power", power),
        ("loss", loss),
        ("noise", noise),
    ):
        if not value > 0:
            raise ValidationError(f"{name} must be positive, got {value}")
    return bandwidth_per_user * math.log2(1.0 + power / loss / noise)


def _system_constant_value(
    rate_bps: float, user_count: int, bandwidth: float, noise: float, frequency: float, c: float
) -> float:
    exponent = rate_bps * user_count / bandwidth
    return (2.0 ** exponent - 1.0) * noise * (4.0 * math.pi * frequency / c) ** 2


def system_constant(rf: RfParams, user_count: int, c: float = SPEED_OF_LIGHT) -> SystemConstant:
    """Derive K from the radio parameters and the number of served devices."""
    if user_count < 1:
        raise ValidationError(f"user_count must be >= 1, got {user_count}")
    exponent = rf.rate * user_count / rf.bandwidth
    if exponent > _MAX_RATE_EXPONENT:
        raise ConfigurationError(
            f"rate*user_count/bandwidth = {exponent:.1f} would overflow 2^x; "
            "review the rate, user count, or bandwidth"
        )
    k = _system_constant_value(rf.rate, user_count, rf.bandwidth, rf.noise, rf.frequency, c)
    return SystemConstant(
        k=k,
        rate=rf.rate,
        user_count=user_count,
        bandwidth=rf.bandwidth,
        noise=rf.noise,
        frequency=rf.frequency,
        c=c,
    )


def required_power(k: SystemConstant, distance: float) -> float:
    """Minimum transmit power K*d^2 in watts to sustain the common rate at distance d."""
    if not distance > 0:
        raise ValidationError(f"distance must be positive, got {distance}")
    return k.k * distance * distance


def lifetime(energy: float, k: SystemConstant, distance: float) -> float:
    """Transmission duration E/(K*d^2) in seconds for a device with energy E at distance d."""
    if not energy > 0:
        raise ValidationError(f"energy must be positive, got {energy}")
    return energy / required_power(k, distance)
