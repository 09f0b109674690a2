"""Replicated sensitivity studies with percentile confidence intervals, and report output."""

from __future__ import annotations

import csv
import io
import json
import time
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .benchmarks import Benchmark, linear_benchmark, load_oo_data, morris_benchmark, oakley_benchmark
from .inputmodel import LHS, sample
from .pce import fit_lar, fit_least_squares, total_degree_set
from .reference import CountingModel, morris_screening, sobol_mc
from .sensitivity import dgsm, sobol_total

REPORT_VERSION = 1
METHODS = ("pce", "mc", "morris")
METRICS = {"pce": ("s_total", "s_dgsm"), "mc": ("s_total",), "morris": ("mu", "mu_star", "sigma")}
# PCE degree when the config leaves it unset
DEFAULT_DEGREE = {"morris": 3, "oakley": 3, "linear": 1}


class StudyError(RuntimeError):
    """A replication failed; carries the 1-based replication index."""

    def __init__(self, replication: int, cause: Exception):
        super().__init__(f"replication {replication} failed: {type(cause).__name__}: {cause}")
        self.replication = replication
        self.cause = cause


@dataclass
class StudyConfig:
    model: str = "morris"
    n: int = 500
    degree: int | None = None
    method: str = "lar"
    replications: int = 100
    seed: int = 0
    scheme: str = LHS
    mc_n: int = 0
    morris_n: int = 0
    morris_delta: float = 0.1
    oo_data: str | None = None
    linear_coefficients: tuple = (1.0, 2.0, 3.0, 4.0, 5.0)

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.n < 1:
            raise ValueError("design size must be >= 1")
        if self.method not in ("ols", "lar"):
            raise ValueError(f"unknown fit method {self.method!r}")
        if self.model not in DEFAULT_DEGREE:
            raise ValueError(f"unknown study model {self.model!r}")
        if self.model == "oakley" and not self.oo_data:
            raise ValueError("the oakley model needs an Oakley-O'Hagan data file (oo_data)")
        if self.mc_n < 0 or self.morris_n < 0:
            raise ValueError("reference budgets must be >= 0")
        self.linear_coefficients = tuple(float(c) for c in self.linear_coefficients)
        if self.degree is None:
            self.degree = DEFAULT_DEGREE[self.model]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["linear_coefficients"] = list(self.linear_coefficients)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> StudyConfig:
        known = cls.__dataclass_fields__
        unknown = set(d) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def build_benchmark(config: StudyConfig) -> Benchmark:
    if config.model == "morris":
        return morris_benchmark()
    if config.model == "linear":
        return linear_benchmark(config.linear_coefficients)
    return oakley_benchmark(load_oo_data(config.oo_data))


@dataclass
class StudyReport:
    """Per-variable medians and 2.5/97.5 percentiles across replications.

    ``stats[method][metric]`` is a ``(3, M)`` array of (median, lo, hi).
    Timings are kept in memory only; they are not part of the serialized
    report so identical configurations produce identical bytes.
    """

    config: dict
    variables: list[str]
    stats: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def median(self, method: str, metric: str) -> np.ndarray:
        return np.asarray(self.stats[method][metric][0])

    def interval(self, method: str, metric: str) -> tuple[np.ndarray, np.ndarray]:
        s = self.stats[method][metric]
        return np.asarray(s[1]), np.asarray(s[2])

    def to_dict(self) -> dict:
        variables = []
        for k, name in enumerate(self.variables):
            methods = {}
            for method in METHODS:
                if method not in self.stats:
                    continue
                methods[method] = {
                    metric: {key: float(arr[j][k]) for j, key in enumerate(("median", "lo", "hi"))}
                    for metric, arr in self.stats[method].items()
                }
            variables.append({"name": name, "methods": methods})
        return {
            "version": REPORT_VERSION,
            "config": self.config,
            "variables": variables,
            "counts": dict(self.counts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> StudyReport:
        if d.get("version") != REPORT_VERSION:
            raise ValueError(f"unsupported report version {d.get('version')!r}")
        names = [v["name"] for v in d["variables"]]
        stats: dict = {}
        for k, v in enumerate(d["variables"]):
            for method, metrics in v["methods"].items():
                for metric, vals in metrics.items():
                    arr = stats.setdefault(method, {}).setdefault(metric, np.zeros((3, len(names))))
                    arr[:, k] = [vals["median"], vals["lo"], vals["hi"]]
        return cls(d.get("config", {}), names, stats, dict(d.get("counts", {})))

    @classmethod
    def from_json(cls, text: str) -> StudyReport:
        return cls.from_dict(json.loads(text))


def _summarize(samples: np.ndarray) -> np.ndarray:
    return np.percentile(samples, [50.0, 2.5, 97.5], axis=0)


def _replication(config: StudyConfig, bench: Benchmark, r: int) -> dict:
    seed = config.seed + r
    out: dict = {}
    try:
        t0 = time.perf_counter()
        f = CountingModel(bench.func, bench.dim)
        design = sample(bench.input, config.n, config.scheme, seed)
        y = f(design.physical(bench.input))
        basis = total_degree_set(bench.dim, config.degree)
        fit = fit_lar if config.method == "lar" else fit_least_squares
        pce = fit(design, y, basis, bench.input)
        out["pce"] = {
            "s_total": [sobol_total(pce, i) for i in range(bench.dim)],
            "s_dgsm": [dgsm(pce, i) for i in range(bench.dim)],
        }
        out["counts"] = {"pce": f.calls}
        out["time"] = {"pce": time.perf_counter() - t0}
        if config.mc_n:
            t0 = time.perf_counter()
            f = CountingModel(bench.func, bench.dim)
            res = sobol_mc(f, bench.input, config.mc_n, seed)
            out["mc"] = {"s_total": list(res.s_total)}
            out["counts"]["mc"] = f.calls
            out["time"]["mc"] = time.perf_counter() - t0
        if config.morris_n:
            t0 = time.perf_counter()
            f = CountingModel(bench.func, bench.dim)
            res = morris_screening(f, bench.input, config.morris_n, config.morris_delta, seed)
            out["morris"] = {"mu": list(res.mu), "mu_star": list(res.mu_star), "sigma": list(res.sigma)}
            out["counts"]["morris"] = f.calls
            out["time"]["morris"] = time.perf_counter() - t0
    except Exception as exc:
        raise StudyError(r, exc) from exc
    return out


def run_study(config: StudyConfig, workers: int = 1) -> StudyReport:
    """Run ``config.replications`` independent replications (seed ``config.seed + r``).

    Replications may run on a thread pool; results are aggregated in
    replication order, so the report does not depend on ``workers``.
    """
    bench = build_benchmark(config)
    reps = range(1, config.replications + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _replication(config, bench, r), reps))
    else:
        results = [_replication(config, bench, r) for r in reps]

    stats = {}
    for method in METHODS:
        if method not in results[0]:
            continue
        stats[method] = {
            metric: _summarize(np.array([res[method][metric] for res in results]))
            for metric in METRICS[method]
        }
    counts = {m: int(sum(res["counts"][m] for res in results)) for m in results[0]["counts"]}
    timings = {m: float(sum(res["time"][m] for res in results)) for m in results[0]["time"]}
    return StudyReport(config.to_dict(), bench.names, stats, counts, timings)


CSV_HEADER = ("variable", "method", "metric", "median", "ci_low", "ci_high")


def report_csv(report: StudyReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for k, name in enumerate(report.variables):
        for method in METHODS:
            for metric, arr in report.stats.get(method, {}).items():
                w.writerow([name, method, metric, *(repr(float(arr[j][k])) for j in range(3))])
    return buf.getvalue()


_BAR_SERIES = (("pce", "s_total", "#4c72b0"), ("pce", "s_dgsm", "#dd8452"), ("mc", "s_total", "#55a868"))


def report_svg(report: StudyReport, width: int = 960, height: int = 420) -> str:
    """Grouped bar chart: one group per variable, bars for each available index, CI whiskers."""
    series = [s for s in _BAR_SERIES if s[1] in report.stats.get(s[0], {})]
    left, right, top, bottom = 60, 20, 30, 60
    plot_w, plot_h = width - left - right, height - top - bottom
    ymax = 1e-12
    for method, metric, _ in series:
        ymax = max(ymax, float(np.max(report.stats[method][metric][2], initial=0.0)))

    def ypos(v):
        return top + plot_h * (1 - min(max(v, 0.0), ymax) / ymax)

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(width),
                     height=str(height), viewBox=f"0 0 {width} {height}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")
    ET.SubElement(svg, "line", x1=str(left), y1=str(top), x2=str(left), y2=str(top + plot_h),
                  stroke="black")
    ET.SubElement(svg, "line", x1=str(left), y1=str(top + plot_h), x2=str(left + plot_w),
                  y2=str(top + plot_h), stroke="black")
    for tick in np.linspace(0, ymax, 5):
        y = ypos(tick)
        ET.SubElement(svg, "line", x1=str(left - 4), y1=f"{y:.2f}", x2=str(left), y2=f"{y:.2f}",
                      stroke="black")
        label = ET.SubElement(svg, "text", x=str(left - 6), y=f"{y + 4:.2f}",
                              attrib={"text-anchor": "end", "font-size": "10"})
        label.text = f"{tick:.2g}"

    nvar = max(len(report.variables), 1)
    group_w = plot_w / nvar
    bar_w = 0.8 * group_w / max(len(series), 1)
    for k, name in enumerate(report.variables):
        g = ET.SubElement(svg, "g", attrib={"class": "variable", "data-name": name})
        x0 = left + k * group_w + 0.1 * group_w
        for s, (method, metric, color) in enumerate(series):
            med, lo, hi = (float(report.stats[method][metric][j][k]) for j in range(3))
            x = x0 + s * bar_w
            ET.SubElement(g, "rect", x=f"{x:.2f}", y=f"{ypos(med):.2f}", width=f"{bar_w:.2f}",
                          height=f"{top + plot_h - ypos(med):.2f}", fill=color,
                          attrib={"data-series": f"{method}:{metric}"})
            cx = x + bar_w / 2
            ET.SubElement(g, "line", x1=f"{cx:.2f}", y1=f"{ypos(lo):.2f}", x2=f"{cx:.2f}",
                          y2=f"{ypos(hi):.2f}", stroke="black", attrib={"class": "ci"})
        label = ET.SubElement(g, "text", x=f"{left + (k + 0.5) * group_w:.2f}",
                              y=str(top + plot_h + 16), attrib={"text-anchor": "middle",
                                                                "font-size": "10"})
        label.text = name

    legend = ET.SubElement(svg, "g", attrib={"class": "legend"})
    for s, (method, metric, color) in enumerate(series):
        x = left + 10 + 150 * s
        ET.SubElement(legend, "rect", x=str(x), y=str(height - 22), width="12", height="12",
                      fill=color)
        t = ET.SubElement(legend, "text", x=str(x + 16), y=str(height - 12),
                          attrib={"font-size": "11"})
        t.text = f"{method.upper()} {metric}"
    return ET.tostring(svg, encoding="unicode", xml_declaration=True) + "\n"


def render_report(report: StudyReport, fmt: str) -> str:
    renderers = {"json": StudyReport.to_json, "csv": report_csv, "svg": report_svg}
    if fmt not in renderers:
        raise ValueError(f"unknown report format {fmt!r}")
    return renderers[fmt](report)


def emit_report(report: StudyReport, fmt: str, path) -> Path:
    """Write the report as ``json``, ``csv`` or ``svg`` to ``path``."""
    text = render_report(report, fmt)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path
