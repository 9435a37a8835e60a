"""Methods-agreement statistics: Bland-Altman analysis and Welch's t-test.

Bland-Altman reports the bias (mean difference between the two methods) and
95% limits of agreement (bias +/- 1.96 times the SD of the differences),
the interval expected to contain 95% of future between-method differences.
Differences are always taken as measured minus reference (``cv - ref``).
The t-test defaults to Welch's unequal-variance form; a pooled-variance
mode is available for completeness.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateVarianceError, InsufficientDataError, ParseError, ValidationError
from .studentt import t_two_sided_p

LOA_MULTIPLIER = 1.96


@dataclass(frozen=True)
class MethodPair:
    """One recording measured by both methods, in centimetres."""

    cv_cm: float
    ref_cm: float
    labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("cv_cm", "ref_cm"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class AgreementResult:
    """Bland-Altman bias and 95% limits of agreement."""

    n: int
    bias_cm: float
    sd_cm: float
    loa_low_cm: float
    loa_high_cm: float

    def __post_init__(self):
        if not (self.loa_low_cm <= self.bias_cm <= self.loa_high_cm):
            raise ValidationError("limits of agreement must bracket the bias")
        width = self.loa_high_cm - self.loa_low_cm
        if abs(width - 2 * LOA_MULTIPLIER * self.sd_cm) > 1e-9:
            raise ValidationError("LoA width inconsistent with sd")


@dataclass(frozen=True)
class TTestResult:
    t_stat: float
    df: float
    p_two_sided: float
    group_means: tuple[float, float]
    group_ns: tuple[int, int]

    def __post_init__(self):
        if not (0.0 <= self.p_two_sided <= 1.0):
            raise ValidationError("p must be in [0, 1]")
        if not (self.df > 0):
            raise ValidationError("df must be positive")


@dataclass(frozen=True)
class SubgroupComparison:
    """Per-group agreement plus, for exactly two groups, a Welch t-test."""

    label_key: str
    groups: dict[str, AgreementResult]
    ttest: TTestResult | None
    skipped_reason: str | None = None


def differences(pairs: Sequence[MethodPair]) -> np.ndarray:
    return np.array([p.cv_cm - p.ref_cm for p in pairs])


def bland_altman(pairs: Sequence[MethodPair]) -> AgreementResult:
    """Bias, SD of differences (n-1 denominator) and 95% LoA."""
    if len(pairs) < 2:
        raise InsufficientDataError(f"Bland-Altman needs at least 2 pairs, got {len(pairs)}")
    d = differences(pairs)
    bias = float(np.mean(d))
    sd = float(np.std(d, ddof=1))
    return AgreementResult(
        n=len(pairs),
        bias_cm=bias,
        sd_cm=sd,
        loa_low_cm=bias - LOA_MULTIPLIER * sd,
        loa_high_cm=bias + LOA_MULTIPLIER * sd,
    )


def welch_t_test(
    group_a: Sequence[float],
    group_b: Sequence[float],
    pooled: bool = False,
) -> TTestResult:
    """Two-sample t-test, Welch's by default.

    ``pooled=True`` switches to the equal-variance form (pooled SD,
    df = n_a + n_b - 2). Raises when either group has fewer than two values
    or when both variances are zero (the statistic is undefined).
    """
    a = np.asarray(group_a, dtype=np.float64)
    b = np.asarray(group_b, dtype=np.float64)
    if len(a) < 2 or len(b) < 2:
        raise InsufficientDataError(
            f"both groups need n >= 2, got {len(a)} and {len(b)}"
        )
    mean_a, mean_b = float(np.mean(a)), float(np.mean(b))
    var_a, var_b = float(np.var(a, ddof=1)), float(np.var(b, ddof=1))
    if var_a == 0.0 and var_b == 0.0:
        raise DegenerateVarianceError("both groups have zero variance")
    na, nb = len(a), len(b)
    if pooled:
        sp2 = ((na - 1) * var_a + (nb - 1) * var_b) / (na + nb - 2)
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
        df = float(na + nb - 2)
    else:
        ra, rb = var_a / na, var_b / nb
        se = math.sqrt(ra + rb)
        df = (ra + rb) ** 2 / (ra**2 / (na - 1) + rb**2 / (nb - 1))
    t = (mean_a - mean_b) / se
    return TTestResult(
        t_stat=t,
        df=df,
        p_two_sided=t_two_sided_p(t, df),
        group_means=(mean_a, mean_b),
        group_ns=(na, nb),
    )


def subgroup_compare(pairs: Sequence[MethodPair], label_key: str) -> SubgroupComparison:
    """Split pairs by a label, run per-group Bland-Altman, and compare.

    With exactly two label values the groups' difference sequences are
    compared with Welch's t-test. With one group there is nothing to test;
    with more than two the test is skipped (the reason is reported) but the
    per-group agreement results are still returned.
    """
    grouped: dict[str, list[MethodPair]] = {}
    for p in pairs:
        if label_key not in p.labels:
            raise ValidationError(f"pair missing label '{label_key}'")
        grouped.setdefault(p.labels[label_key], []).append(p)

    results = {value: bland_altman(members) for value, members in sorted(grouped.items())}
    if len(grouped) == 2:
        (_, members_a), (_, members_b) = sorted(grouped.items())
        ttest = welch_t_test(differences(members_a), differences(members_b))
        return SubgroupComparison(label_key=label_key, groups=results, ttest=ttest)
    reason = (
        f"t-test skipped: grouping by '{label_key}' produced {len(grouped)} "
        f"group(s) ({', '.join(sorted(grouped))}); exactly 2 required"
    )
    return SubgroupComparison(
        label_key=label_key, groups=results, ttest=None, skipped_reason=reason
    )


PAIRS_REQUIRED_COLUMNS = ("cv_cm", "ref_cm")


def parse_pairs_file(data: bytes) -> list[MethodPair]:
    """Parse a pairs CSV: header ``cv_cm,ref_cm[,label1,...]``."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty pairs file", line=1) from None
    if tuple(header[:2]) != PAIRS_REQUIRED_COLUMNS:
        raise ParseError("pairs header must start with 'cv_cm,ref_cm'", line=1)
    label_keys = header[2:]
    pairs = []
    for i, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=i)
        try:
            cv, ref = float(row[0]), float(row[1])
        except ValueError as exc:
            raise ParseError(f"bad decimal field: {exc}", line=i) from None
        try:
            pairs.append(
                MethodPair(cv_cm=cv, ref_cm=ref, labels=dict(zip(label_keys, row[2:])))
            )
        except ValidationError as exc:
            raise ValidationError(f"line {i}: {exc}") from None
    return pairs


def serialize_pairs_file(pairs: Sequence[MethodPair], label_keys: Sequence[str]) -> bytes:
    """Write pairs to CSV with the given label columns."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(PAIRS_REQUIRED_COLUMNS) + list(label_keys))
    for p in pairs:
        writer.writerow(
            [f"{p.cv_cm:.6f}", f"{p.ref_cm:.6f}"] + [p.labels.get(k, "") for k in label_keys]
        )
    return out.getvalue().encode("utf-8")


# --- Bland-Altman plot ------------------------------------------------------

_SVG_W, _SVG_H = 640, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 78, 96, 24, 56


def _axis_range(lo: float, hi: float) -> tuple[float, float]:
    if hi - lo < 1e-12:
        pad = max(abs(hi), 1.0) * 0.5
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.08
    return lo - pad, hi + pad


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * max(abs(hi), 1.0):
        ticks.append(0.0 if abs(v) < step * 1e-9 else v)
        v += step
    return ticks


def bland_altman_svg(pairs: Sequence[MethodPair], result: AgreementResult) -> bytes:
    """Render the Bland-Altman scatter (mean vs difference) as an SVG.

    Output is a standalone vector document with the bias and both limits of
    agreement drawn as horizontal lines; identical input yields
    byte-identical output.
    """
    if len(pairs) < 2:
        raise InsufficientDataError("plot needs at least 2 pairs")
    means = np.array([(p.cv_cm + p.ref_cm) / 2.0 for p in pairs])
    diffs = differences(pairs)

    x_lo, x_hi = _axis_range(float(means.min()), float(means.max()))
    y_values = np.concatenate((diffs, [result.loa_low_cm, result.loa_high_cm]))
    y_lo, y_hi = _axis_range(float(y_values.min()), float(y_values.max()))

    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B

    def sx(v: float) -> float:
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return _MARGIN_T + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    for tick in _ticks(x_lo, x_hi):
        px = sx(tick)
        parts.append(
            f'<line x1="{px:.2f}" y1="{_MARGIN_T + plot_h}" x2="{px:.2f}" '
            f'y2="{_MARGIN_T + plot_h + 5}" stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{_MARGIN_T + plot_h + 18}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{tick:.2f}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        py = sy(tick)
        parts.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{py:.2f}" x2="{_MARGIN_L}" y2="{py:.2f}" '
            'stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{py + 4:.2f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{tick:.2f}</text>'
        )
    for label, value, dash in (
        ("bias", result.bias_cm, ""),
        ("-1.96 SD", result.loa_low_cm, ' stroke-dasharray="6 4"'),
        ("+1.96 SD", result.loa_high_cm, ' stroke-dasharray="6 4"'),
    ):
        py = sy(value)
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{py:.2f}" x2="{_MARGIN_L + plot_w}" y2="{py:.2f}" '
            f'stroke="#1f77b4" stroke-width="1.5"{dash}/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L + plot_w + 6}" y="{py + 4:.2f}" font-family="sans-serif" '
            f'font-size="11">{label} {value:.3f}</text>'
        )
    for mx, dy in zip(means, diffs):
        parts.append(
            f'<circle cx="{sx(float(mx)):.2f}" cy="{sy(float(dy)):.2f}" r="3.5" '
            'fill="#d62728" fill-opacity="0.75"/>'
        )
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.2f}" y="{_SVG_H - 14}" font-family="sans-serif" '
        'font-size="13" text-anchor="middle">Mean of methods (cm)</text>'
    )
    parts.append(
        f'<text x="20" y="{_MARGIN_T + plot_h / 2:.2f}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 20 {_MARGIN_T + plot_h / 2:.2f})">Difference (cm)</text>'
    )
    parts.append("</svg>")
    parts.append("")
    return "\n".join(parts).encode("utf-8")
