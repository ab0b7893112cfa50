"""Propagation, decode-error models, and topology link tables.

Node numbering convention used throughout: with K pairs, the transmitter of
pair i is node i and its receiver is node K + i.

Decode errors apply to the control plane (request/grant decoding): a node
decoding a frame fails with probability p_err(link_snr, k), where k is the
number of simultaneously transmitting nodes in range of the decoder.  p_err is
monotone decreasing in SNR and increasing in k; above `decode_cap` concurrent
transmitters nothing decodes at all.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 3.0e8  # m/s


def fspl_db(distance_m: float, freq_hz: float) -> float:
    """Free-space path loss, 20*log10(4*pi*d*f/c)."""
    if distance_m <= 0:
        return 0.0
    return 20.0 * math.log10(4.0 * math.pi * distance_m * freq_hz / SPEED_OF_LIGHT)


# ---------------------------------------------------------------------------
# decode-error models
# ---------------------------------------------------------------------------

class ErrorModel:
    decode_cap: int = 4

    def p_err(self, snr_db: float, k: int) -> float:
        raise NotImplementedError


class NoErrors(ErrorModel):
    """Perfect control-plane decoding (still subject to the decode cap)."""

    def __init__(self, decode_cap: int = 4):
        self.decode_cap = decode_cap

    def p_err(self, snr_db: float, k: int) -> float:
        if k > self.decode_cap:
            return 1.0
        return 0.0


class FixedError(ErrorModel):
    """Constant decode-error probability, mostly for crafted tests."""

    def __init__(self, p: float, decode_cap: int = 4):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p_err must be in [0,1], got {p}")
        self.p = p
        self.decode_cap = decode_cap

    def p_err(self, snr_db: float, k: int) -> float:
        if k > self.decode_cap:
            return 1.0
        return self.p


class LogisticErrorModel(ErrorModel):
    """Smooth SNR->error curve with one transition midpoint per concurrency level.

    p(snr, k) = p_min + (p_max - p_min) / (1 + exp((snr - mid_k) / slope)),
    mid_k = mid_base + mid_step * (k - 1).  Values clamp to [p_min, p_max].
    """

    def __init__(
        self,
        p_min: float = 0.001,
        p_max: float = 0.1,
        mid_base: float = 15.0,
        mid_step: float = 5.0,
        slope: float = 5.0,
        decode_cap: int = 4,
    ):
        if not 0.0 <= p_min <= p_max <= 1.0:
            raise ValueError("require 0 <= p_min <= p_max <= 1")
        if slope <= 0:
            raise ValueError("slope must be positive")
        self.p_min = p_min
        self.p_max = p_max
        self.mid_base = mid_base
        self.mid_step = mid_step
        self.slope = slope
        self.decode_cap = decode_cap

    def p_err(self, snr_db: float, k: int) -> float:
        if k > self.decode_cap:
            return 1.0
        mid = self.mid_base + self.mid_step * (k - 1)
        x = (snr_db - mid) / self.slope
        # guard exp overflow for extreme SNR values
        if x > 60.0:
            p = self.p_min
        elif x < -60.0:
            p = self.p_max
        else:
            p = self.p_min + (self.p_max - self.p_min) / (1.0 + math.exp(x))
        return min(self.p_max, max(self.p_min, p))


class TableErrorModel(ErrorModel):
    """p_err from a CSV grid (snr_db, k, p_err), bilinear, edge-clamped."""

    def __init__(self, snrs: list[float], ks: list[int], grid: list[list[float]],
                 decode_cap: int = 4):
        if snrs != sorted(snrs) or ks != sorted(ks):
            raise ValueError("table axes must be sorted ascending")
        self.snrs = snrs
        self.ks = ks
        self.grid = grid  # grid[i][j] = p_err at (snrs[i], ks[j])
        self.decode_cap = decode_cap

    @classmethod
    def from_csv(cls, path: str, decode_cap: int = 4) -> "TableErrorModel":
        cells: dict[tuple[float, int], float] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            required = {"snr_db", "k", "p_err"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise ValueError(f"{path}: expected columns snr_db,k,p_err")
            for row in reader:
                cells[(float(row["snr_db"]), int(row["k"]))] = float(row["p_err"])
        snrs = sorted({s for s, _ in cells})
        ks = sorted({k for _, k in cells})
        missing = [(s, k) for s in snrs for k in ks if (s, k) not in cells]
        if missing:
            raise ValueError(f"{path}: table is not a full grid, missing {missing[:3]}")
        grid = [[cells[(s, k)] for k in ks] for s in snrs]
        return cls(snrs, ks, grid, decode_cap=decode_cap)

    @staticmethod
    def _bracket(axis, x):
        """Return (i0, i1, w) so value = (1-w)*axis[i0] + w*axis[i1], clamped."""
        if x <= axis[0]:
            return 0, 0, 0.0
        if x >= axis[-1]:
            return len(axis) - 1, len(axis) - 1, 0.0
        for i in range(len(axis) - 1):
            if axis[i] <= x <= axis[i + 1]:
                span = axis[i + 1] - axis[i]
                w = 0.0 if span == 0 else (x - axis[i]) / span
                return i, i + 1, w
        return len(axis) - 1, len(axis) - 1, 0.0

    def p_err(self, snr_db: float, k: int) -> float:
        if k > self.decode_cap:
            return 1.0
        i0, i1, wi = self._bracket(self.snrs, snr_db)
        j0, j1, wj = self._bracket(self.ks, k)
        g = self.grid
        top = (1 - wj) * g[i0][j0] + wj * g[i0][j1]
        bot = (1 - wj) * g[i1][j0] + wj * g[i1][j1]
        return (1 - wi) * top + wi * bot


def build_error_model(scn) -> ErrorModel:
    kind = scn.error_model
    if kind == "none":
        return NoErrors(decode_cap=scn.decode_cap)
    if kind == "fixed":
        return FixedError(scn.p_err_value, decode_cap=scn.decode_cap)
    if kind == "table":
        if not scn.table_path:
            raise ValueError("error_model = table requires table_path")
        return TableErrorModel.from_csv(scn.table_path, decode_cap=scn.decode_cap)
    return LogisticErrorModel(
        p_min=scn.p_min,
        p_max=scn.p_max,
        mid_base=scn.snr_mid_base,
        mid_step=scn.snr_mid_step,
        slope=scn.slope,
        decode_cap=scn.decode_cap,
    )


# ---------------------------------------------------------------------------
# topologies
# ---------------------------------------------------------------------------

@dataclass
class LinkTable:
    """Symmetric in-range / SNR matrix over the 2K nodes of K pairs."""

    num_pairs: int
    ranges: list[list[bool]]
    snrs: list[list[float]]

    def in_range(self, a: int, b: int) -> bool:
        return a != b and self.ranges[a][b]

    def snr(self, a: int, b: int) -> float:
        return self.snrs[a][b]

    @property
    def num_nodes(self) -> int:
        return 2 * self.num_pairs


def _empty_table(num_pairs: int) -> LinkTable:
    n = 2 * num_pairs
    return LinkTable(
        num_pairs=num_pairs,
        ranges=[[False] * n for _ in range(n)],
        snrs=[[float("-inf")] * n for _ in range(n)],
    )


def _set_link(t: LinkTable, a: int, b: int, snr: float) -> None:
    t.ranges[a][b] = t.ranges[b][a] = True
    t.snrs[a][b] = t.snrs[b][a] = snr


def build_topology(scn) -> LinkTable:
    kind = scn.topology
    K = scn.num_pairs
    if kind == "fully_connected":
        t = _empty_table(K)
        for a in range(2 * K):
            for b in range(a + 1, 2 * K):
                _set_link(t, a, b, scn.snr_db)
        return t
    if kind in ("hidden", "exposed"):
        if K != 2:
            raise ValueError(f"topology {kind!r} is defined for exactly 2 pairs")
        t = _empty_table(2)
        # nodes: T1=0, T2=1, R1=2, R2=3
        if kind == "hidden":
            links = [(0, 2), (1, 2), (1, 3)]
        else:
            links = [(0, 2), (1, 3), (0, 1)]
        for a, b in links:
            _set_link(t, a, b, scn.snr_db)
        return t
    if kind == "explicit":
        pts = _parse_positions(scn.positions, K)
        freq_hz = scn.freq_ghz * 1e9
        t = _empty_table(K)
        for a in range(2 * K):
            for b in range(a + 1, 2 * K):
                d = math.dist(pts[a], pts[b])
                snr = scn.tx_power_dbm - fspl_db(d, freq_hz) - scn.noise_dbm
                if snr >= scn.min_snr_db:
                    _set_link(t, a, b, snr)
        return t
    raise ValueError(f"unknown topology {kind!r}")


def _parse_positions(spec: str, num_pairs: int) -> list[tuple[float, float]]:
    items = [s.strip() for s in spec.split(";") if s.strip()]
    if len(items) != 2 * num_pairs:
        raise ValueError(
            f"explicit topology needs {2 * num_pairs} positions "
            f"(transmitters then receivers), got {len(items)}"
        )
    pts = []
    for item in items:
        parts = item.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad position {item!r}, expected 'x,y'")
        pts.append((float(parts[0]), float(parts[1])))
    return pts
