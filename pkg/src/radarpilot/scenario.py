"""Coexistence scenario description: OFDM pilot grid vs periodic radar pulses.

The scenario is one finite channel-estimation window holding n_p equispaced
pilot-bearing OFDM symbols. Pilot l occupies [l*t_pil, l*t_pil + t_ofdm]. The
radar emits pulses at t_f + j*t_rep for j = 0, 1, 2, ..., where t_f is the
time of arrival of the first pulse, uniform on [0, t_rep]. Pulses may be
broadened to a width t_pulse and accompanied by specular echoes at fixed
extra delays; an echo hit counts exactly like a direct hit.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

from .intervals import Interval


class ScenarioError(ValueError):
    """A scenario field violates its constraint (named in the message)."""


class PilotGridWarning(UserWarning):
    """Pilot spacing is not an integer multiple of the symbol duration."""


def snap_ceil(ratio: float, rel_tol: float = 1e-9) -> int:
    """Ceiling that forgives float noise just below an integer."""
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) <= rel_tol * nearest:
        return int(nearest)
    return int(math.ceil(ratio))


_CONFIG_FIELDS = ("t_ofdm", "t_pil", "n_p", "t_rep", "t_pulse", "echo_delays")
_REQUIRED_FIELDS = ("t_ofdm", "t_pil", "n_p", "t_rep")


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated coexistence scenario. All durations in seconds.

    t_ofdm:      OFDM symbol duration (> 0).
    t_pil:       pilot spacing (>= t_ofdm).
    n_p:         number of pilots in the estimation window (>= 1).
    t_rep:       radar pulse repetition interval (> 0). Values <= t_ofdm are
                 accepted; in that regime every symbol is hit and all
                 interference probabilities equal 1.
    t_pulse:     broadened radar pulse width (>= 0; 0 models an
                 infinitesimally short wideband pulse).
    echo_delays: strictly increasing non-negative delays of specular echoes;
                 the direct path (delay 0) is always present implicitly.
    """

    t_ofdm: float
    t_pil: float
    n_p: int
    t_rep: float
    t_pulse: float = 0.0
    echo_delays: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "echo_delays", tuple(float(d) for d in self.echo_delays))
        for name in ("t_ofdm", "t_pil", "t_rep", "t_pulse"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ScenarioError(f"{name} must be a finite number, got {value!r}")
        if self.t_ofdm <= 0:
            raise ScenarioError(f"t_ofdm must be > 0, got {self.t_ofdm}")
        if self.t_pil < self.t_ofdm:
            raise ScenarioError(
                f"t_pil must be >= t_ofdm, got t_pil={self.t_pil} < t_ofdm={self.t_ofdm}"
            )
        if not isinstance(self.n_p, int) or isinstance(self.n_p, bool) or self.n_p < 1:
            raise ScenarioError(f"n_p must be an integer >= 1, got {self.n_p!r}")
        if self.t_rep <= 0:
            raise ScenarioError(f"t_rep must be > 0, got {self.t_rep}")
        if self.t_pulse < 0:
            raise ScenarioError(f"t_pulse must be >= 0, got {self.t_pulse}")
        prev = -math.inf
        for d in self.echo_delays:
            if not math.isfinite(d) or d < 0:
                raise ScenarioError(f"echo delays must be finite and >= 0, got {d}")
            if d <= prev:
                raise ScenarioError(
                    f"echo_delays must be strictly increasing, got {self.echo_delays}"
                )
            prev = d
        ratio = self.t_pil / self.t_ofdm
        if abs(ratio - round(ratio)) > 1e-3 * max(1.0, round(ratio)):
            warnings.warn(
                f"t_pil={self.t_pil} is not an integer multiple of t_ofdm={self.t_ofdm}; "
                "the analysis does not require it, but the pilot grid will not align "
                "with symbol boundaries",
                PilotGridWarning,
                stacklevel=2,
            )

    @property
    def t_csi(self) -> float:
        """Estimation window length: n_p pilot spacings."""
        return self.n_p * self.t_pil

    @property
    def n_r(self) -> int:
        """Maximum number of radar pulses inside the estimation window."""
        return snap_ceil(self.t_csi / self.t_rep)

    @property
    def n_paths(self) -> int:
        """Propagation path count: direct plus echoes."""
        return 1 + len(self.echo_delays)

    @property
    def hit_width(self) -> float:
        """Width in t_f of the window in which one pulse overlaps one pilot."""
        return self.t_ofdm + self.t_pulse

    @property
    def is_saturated(self) -> bool:
        """True when pulses repeat at least once per symbol: every pilot hit."""
        return self.t_rep <= self.t_ofdm

    def with_updates(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "t_ofdm": self.t_ofdm,
            "t_pil": self.t_pil,
            "n_p": self.n_p,
            "t_rep": self.t_rep,
            "t_pulse": self.t_pulse,
            "echo_delays": list(self.echo_delays),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build a config from a JSON-style dict; unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ScenarioError(f"config document must be an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(_CONFIG_FIELDS))
    if unknown:
        raise ScenarioError(f"unknown config keys: {unknown}")
    missing = sorted(set(_REQUIRED_FIELDS) - set(data))
    if missing:
        raise ScenarioError(f"missing config keys: {missing}")
    n_p = data["n_p"]
    if isinstance(n_p, float):
        if n_p != int(n_p):
            raise ScenarioError(f"n_p must be an integer >= 1, got {n_p!r}")
        n_p = int(n_p)
    return ScenarioConfig(
        t_ofdm=float(data["t_ofdm"]),
        t_pil=float(data["t_pil"]),
        n_p=n_p,
        t_rep=float(data["t_rep"]),
        t_pulse=float(data.get("t_pulse", 0.0)),
        echo_delays=tuple(float(d) for d in data.get("echo_delays", ())),
    )


def config_from_json(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON config: {exc}") from exc
    return config_from_dict(data)


def pilot_interval(config: ScenarioConfig, l: int) -> Interval:
    """Occupancy interval of pilot l: [l*t_pil, l*t_pil + t_ofdm]."""
    if not 0 <= l < config.n_p:
        raise ScenarioError(f"pilot index must be in [0, {config.n_p - 1}], got {l}")
    start = l * config.t_pil
    return Interval(start, start + config.t_ofdm)


def hit_window(config: ScenarioConfig, l: int, j: int, echo_delay: float = 0.0) -> Interval:
    """First-pulse arrival times t_f for which pulse j (via the path delayed
    by echo_delay) overlaps pilot l.

    The pulse occupies [t_f + j*t_rep + echo_delay, ... + t_pulse], so overlap
    with [l*t_pil, l*t_pil + t_ofdm] happens exactly for
    t_f in [l*t_pil - j*t_rep - echo_delay - t_pulse,
            l*t_pil + t_ofdm - j*t_rep - echo_delay],
    an interval of width t_ofdm + t_pulse for every (l, j, echo_delay).
    """
    if not 0 <= l < config.n_p:
        raise ScenarioError(f"pilot index must be in [0, {config.n_p - 1}], got {l}")
    if j < 0:
        raise ScenarioError(f"pulse index must be >= 0, got {j}")
    hi = l * config.t_pil + config.t_ofdm - j * config.t_rep - echo_delay
    return Interval(hi - config.hit_width, hi)
