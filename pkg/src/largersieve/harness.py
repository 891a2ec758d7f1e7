"""Sweep configuration and run reports shared by the verifiers and the CLI."""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = 1
TOP_WITNESSES = 5

TARGETS = (
    "thm3", "thm4", "cor2", "lemma3", "lemma4", "remark", "hensel", "sieve",
    "thm2", "lemma5", "lemma6", "lemma7", "gauss",
)


def _key(obj):
    return json.dumps(obj, sort_keys=True, default=str)


@dataclass
class SweepConfig:
    target: str
    degrees: tuple = (2, 2)
    q_range: tuple = (2, 1000)
    coeff_box: int = 5
    dims: tuple = (2, 3)
    interval_policy: str = "measure"
    seed: int = 0
    samples: int = 0
    workers: int = 1
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        if self.interval_policy not in ("measure", "count"):
            raise ValueError("interval_policy must be 'measure' or 'count'")
        self.degrees = tuple(int(d) for d in self.degrees)
        self.q_range = tuple(int(q) for q in self.q_range)
        self.dims = tuple(int(m) for m in self.dims)
        self.options = dict(self.options)
        if len(self.degrees) != 2 or len(self.q_range) != 2 or len(self.dims) != 2:
            raise ValueError("ranges are [lo, hi] pairs")
        if self.degrees[0] < 1 or self.degrees[0] > self.degrees[1] or self.degrees[1] > 64:
            raise ValueError("degree range out of bounds")
        if self.q_range[0] < 2 or self.q_range[0] > self.q_range[1] or self.q_range[1] > 10**7:
            raise ValueError("modulus range out of bounds")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.coeff_box < 0 or self.samples < 0 or self.workers < 1:
            raise ValueError("negative size parameter")

    @classmethod
    def from_dict(cls, d, target=None):
        d = dict(d)
        if target is not None:
            d["target"] = target
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path, target=None):
        with open(path) as fh:
            return cls.from_dict(json.load(fh), target)

    def to_dict(self):
        return asdict(self)


@dataclass
class RunReport:
    target: str
    instances_checked: int = 0
    violations: list = field(default_factory=list)
    extremal_witnesses: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self):
        return not self.violations

    def violation(self, **instance):
        self.violations.append(instance)

    def witness(self, ratio, **instance):
        """Keep the few instances closest to (or beyond) the asserted bound."""
        self.extremal_witnesses.append({"ratio": float(ratio), **instance})
        if len(self.extremal_witnesses) > 4 * TOP_WITNESSES:
            self._trim()

    def _trim(self):
        self.extremal_witnesses.sort(key=lambda w: (-w["ratio"], _key(w)))
        del self.extremal_witnesses[TOP_WITNESSES:]

    def merge(self, other):
        self.instances_checked += other.instances_checked
        self.violations.extend(other.violations)
        self.extremal_witnesses.extend(other.extremal_witnesses)
        for k, v in other.info.items():
            if isinstance(v, int) and not isinstance(v, bool) and isinstance(self.info.get(k), int):
                self.info[k] += v
            else:
                self.info.setdefault(k, v)
        self._trim()
        return self

    def finalize(self):
        self.violations.sort(key=_key)
        self._trim()
        return self

    def to_dict(self, include_timing=False):
        d = {
            "schema_version": SCHEMA_VERSION,
            "target": self.target,
            "instances_checked": self.instances_checked,
            "violations": self.violations,
            "extremal_witnesses": self.extremal_witnesses,
            "info": self.info,
        }
        if include_timing:
            d["wall_time"] = round(self.wall_time, 3)
        return d


def run_chunks(fn, chunks, workers=1, target=None):
    """Run ``fn(chunk) -> RunReport`` over chunks and merge in chunk order."""
    t0 = time.perf_counter()
    if workers <= 1 or len(chunks) <= 1:
        parts = [fn(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, chunks))
    out = RunReport(target or (parts[0].target if parts else "empty"))
    for p in parts:
        out.merge(p)
    out.wall_time = time.perf_counter() - t0
    return out.finalize()


def split_range(lo, hi, pieces):
    """Split [lo, hi] into at most ``pieces`` contiguous (lo, hi) chunks."""
    pieces = max(1, min(pieces, hi - lo + 1))
    step = -(-(hi - lo + 1) // pieces)
    return [(a, min(a + step - 1, hi)) for a in range(lo, hi + 1, step)]
