"""Output emission: stats rows, analysis JSON, feature plots, MI chart.

Figures go out as SVG through matplotlib; every figure also gets a
plain-text tab-separated sidecar holding exactly the plotted values, so the
charts can be re-drawn without this package.  Text output is
byte-deterministic for identical inputs (figure metadata dates are
suppressed, floats use repr, rounding is half-up and locale-independent).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .complexity.measures import FAMILIES
from .complexity.report import ComplexityReport
from .features import FeatureScore
from .preprocess import ImbalanceStat

BENIGN_COLOR = "blue"
MALICIOUS_COLOR = "red"

#: uniform-thinning cap for plotted points; the factor used is recorded
DEFAULT_PLOT_CAP = 200_000

_SVG_RC = {"svg.hashsalt": "otdp", "svg.fonttype": "none"}

STATS_HEADER = (
    "dataset | selected file | file format | data points | features | IR | avg CS"
)


def format_half_up(value: float, places: int) -> str:
    """Fixed-point rendering with ties rounded away from zero."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass
class AnalysisBundle:
    """Everything one analysed file produces, ready for the emitters."""

    dataset_name: str
    source_file: str
    file_format: str
    n_points: int
    n_features: int
    imbalance: ImbalanceStat
    complexity: ComplexityReport
    ranking: tuple[FeatureScore, ...]
    plot_features: tuple[int, ...]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.plot_features) > 5:
            raise ValueError("at most 5 features are plotted")
        ranked = {s.feature_index for s in self.ranking}
        if not set(self.plot_features) <= ranked:
            raise ValueError("plot_features must come from the ranking")


def emit_stats_row(bundle: AnalysisBundle) -> tuple[str, dict]:
    """One statistics row: text (IR to 2 decimals, CS to 3) plus a lossless
    JSON object."""
    text = " | ".join(
        [
            bundle.dataset_name,
            bundle.source_file,
            bundle.file_format,
            str(bundle.n_points),
            str(bundle.n_features),
            format_half_up(bundle.imbalance.ir, 2),
            format_half_up(bundle.complexity.cs, 3),
        ]
    )
    return text, bundle_to_json(bundle)


def _finite_or_none(value: float) -> float | None:
    value = float(value)
    return value if np.isfinite(value) else None


def bundle_to_json(bundle: AnalysisBundle) -> dict:
    report = bundle.complexity
    return {
        "dataset": bundle.dataset_name,
        "source_file": bundle.source_file,
        "file_format": bundle.file_format,
        "n_points": bundle.n_points,
        "n_features": bundle.n_features,
        "imbalance": {
            "n_benign": bundle.imbalance.n_benign,
            "n_malicious": bundle.imbalance.n_malicious,
            "ir": bundle.imbalance.ir,
        },
        "complexity": {
            "cs": report.cs,
            "k_used": report.k_used,
            "m_used": report.m_used,
            "seed": report.seed,
            "low_confidence": report.low_confidence,
            "sample_imbalance": {
                "n_benign": report.ir.n_benign,
                "n_malicious": report.ir.n_malicious,
                "ir": report.ir.ir,
            },
            "measures": [
                {
                    "id": mv.id.value,
                    "family": FAMILIES[mv.id],
                    "raw": _finite_or_none(mv.raw),
                    "normalized": mv.normalized,
                }
                for mv in report.measures
            ],
            "skipped": [
                {"id": mid.value, "reason": reason} for mid, reason in report.skipped
            ],
        },
        "ranking": [
            {"index": s.feature_index, "name": s.feature_name, "mi_bits": s.mi_bits}
            for s in bundle.ranking
        ],
        "plot_features": list(bundle.plot_features),
        "provenance": bundle.provenance,
    }


def render_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def parse_stats_json(text: str) -> dict:
    return json.loads(text)


def _safe_name(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("_")
    return cleaned or "feature"


@dataclass(frozen=True)
class PlotResult:
    feature_index: int
    feature_name: str
    figure_path: Path
    sidecar_path: Path
    n_plotted: int
    thinning_factor: int
    constant: bool


@dataclass(frozen=True)
class ChartResult:
    figure_path: Path
    sidecar_path: Path
    n_bars: int


def _column(values: np.ndarray | Mapping[int, np.ndarray], index: int) -> np.ndarray:
    if isinstance(values, Mapping):
        return np.asarray(values[index], dtype=np.float64)
    return np.asarray(values, dtype=np.float64)[:, index]


def emit_feature_plots(
    X: np.ndarray | Mapping[int, np.ndarray],
    y: np.ndarray,
    plot_features: Sequence[int],
    out_dir: str | Path,
    feature_names: Mapping[int, str] | Sequence[str] | None = None,
    row_indices: np.ndarray | None = None,
    plot_cap: int = DEFAULT_PLOT_CAP,
    benign_color: str = BENIGN_COLOR,
    malicious_color: str = MALICIOUS_COLOR,
) -> list[PlotResult]:
    """Per-feature scatter of value against row index, class-coloured.

    Benign points draw in `benign_color`, malicious in `malicious_color`;
    the vertical axis runs linearly from the feature's minimum to its
    maximum.  Above `plot_cap` points the rows are uniformly thinned and the
    stride recorded.  Each plot gets a sidecar with exactly the plotted
    (row_index, value, class) triples.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    y = np.asarray(y)
    n = y.shape[0]
    if row_indices is None:
        row_indices = np.arange(n)
    row_indices = np.asarray(row_indices)

    stride = 1
    if plot_cap and n > plot_cap:
        stride = int(np.ceil(n / plot_cap))
    keep = np.arange(0, n, stride)

    results = []
    for rank, feature_index in enumerate(plot_features, start=1):
        values = _column(X, feature_index)
        if feature_names is None:
            name = f"feature_{feature_index}"
        elif isinstance(feature_names, Mapping):
            name = feature_names[feature_index]
        else:
            name = feature_names[feature_index]
        idx = row_indices[keep]
        vals = values[keep]
        cls = y[keep]
        stem = f"feature_{rank:02d}_{_safe_name(name)}"
        sidecar_path = out / f"{stem}.tsv"
        figure_path = out / f"{stem}.svg"

        lines = ["row_index\tvalue\tclass"]
        lines.extend(
            f"{int(i)}\t{float(v)!r}\t{int(c)}" for i, v, c in zip(idx, vals, cls)
        )
        sidecar_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

        lo, hi = float(values.min()), float(values.max())
        constant = lo == hi
        with matplotlib.rc_context(_SVG_RC):
            fig = Figure(figsize=(6.4, 4.0))
            ax = fig.add_subplot()
            benign = cls == 0
            ax.scatter(
                idx[benign], vals[benign], s=4, color=benign_color,
                label="benign", linewidths=0,
            )
            ax.scatter(
                idx[~benign], vals[~benign], s=4, color=malicious_color,
                label="malicious", linewidths=0,
            )
            ax.set_xlabel("row index")
            ax.set_ylabel("feature value")
            ax.set_title(name)
            if constant:
                pad = abs(lo) * 0.1 + 1.0
                ax.set_ylim(lo - pad, hi + pad)
                ax.axhline(lo, color="gray", linewidth=0.8, zorder=0)
                ax.annotate(
                    "constant feature",
                    xy=(0.5, 0.9),
                    xycoords="axes fraction",
                    ha="center",
                    color="gray",
                )
            else:
                ax.set_ylim(lo, hi)
            ax.legend(loc="best", markerscale=3, fontsize=8)
            fig.savefig(figure_path, format="svg", metadata={"Date": None})
        results.append(
            PlotResult(
                feature_index=feature_index,
                feature_name=name,
                figure_path=figure_path,
                sidecar_path=sidecar_path,
                n_plotted=int(keep.size),
                thinning_factor=stride,
                constant=constant,
            )
        )
    return results


def emit_importance_chart(
    ranking: Sequence[FeatureScore],
    out_path: str | Path,
) -> ChartResult:
    """Horizontal bar chart of MI per feature in rank order (best on top),
    plus a rank/index/name/mi_bits sidecar."""
    if not ranking:
        raise ValueError("empty ranking")
    figure_path = Path(out_path)
    figure_path.parent.mkdir(parents=True, exist_ok=True)
    sidecar_path = figure_path.with_suffix(".tsv")

    lines = ["rank\tfeature_index\tfeature_name\tmi_bits"]
    lines.extend(
        f"{rank}\t{s.feature_index}\t{s.feature_name}\t{float(s.mi_bits)!r}"
        for rank, s in enumerate(ranking, start=1)
    )
    sidecar_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    n = len(ranking)
    values = [s.mi_bits for s in ranking]
    with matplotlib.rc_context(_SVG_RC):
        fig = Figure(figsize=(6.4, max(2.0, 0.18 * n + 1.0)))
        ax = fig.add_subplot()
        positions = np.arange(n)
        ax.barh(positions, values, color="steelblue")
        ax.set_yticks(positions)
        show_names = n <= 40
        ax.set_yticklabels(
            [s.feature_name if show_names else str(s.feature_index) for s in ranking],
            fontsize=6 if n > 20 else 8,
        )
        ax.invert_yaxis()
        ax.set_xlabel("mutual information (bits)")
        ax.set_xlim(0, max(max(values), 0.1) * 1.05)
        fig.savefig(figure_path, format="svg", metadata={"Date": None})
    return ChartResult(figure_path=figure_path, sidecar_path=sidecar_path, n_bars=n)
