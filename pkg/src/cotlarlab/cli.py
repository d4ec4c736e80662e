"""Command-line surface: named verification runs, searches, experiments.

Every run echoes its full configuration into the report so a report file is
self-describing, and every violation or witness carries serialized inputs
that the ``replay`` subcommand can feed back through the library.  Reports
are byte-identical for identical configs and seeds, regardless of the
thread count; only the elapsed_ms field varies.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random as _random
import sys
from dataclasses import dataclass

from . import __version__, ank, cotlar, ncfourier
from .psl2 import (
    enumerate_box,
    format_matrix,
    parse_cmatrix,
    parse_matrix,
    random_psl2c,
)
from .quadring import RingParam
from .report import CheckReport
from .symbol import kernel_class, m_exact, verify_theoremB

COMMANDS = (
    "verify-theorem-b",
    "verify-cotlar",
    "verify-invariance",
    "verify-lemmas",
    "verify-proof-terms",
    "counterexample-bianchi",
    "ank-roundtrip",
    "norm-experiment",
    "enumerate",
    "replay",
)


@dataclass
class RunConfig:
    command: str
    n: int = 2
    kind: str = "full"
    bound: int = 2
    pair_budget: int = 10**6
    samples: int = 10**5
    seed: int = 42
    tol: float = 1e-9
    format: str = "json"
    output: str | None = None
    threads: int = 1
    plots: bool = False
    k_list: tuple = (1, 2, 3)
    trials: int = 100
    support_size: int = 20
    budget: int = 10**5
    input: str | None = None

    def echo(self) -> dict:
        # threads deliberately omitted: results are independent of the worker
        # count, and reports must be byte-identical across thread counts
        return {
            "command": self.command,
            "n": self.n,
            "kind": self.kind,
            "bound": self.bound,
            "pair_budget": self.pair_budget,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
        }


def _ring(config: RunConfig) -> RingParam:
    return RingParam(config.n, config.kind)


def _require_full(config: RunConfig, what: str) -> RingParam:
    ring = _ring(config)
    if not ring.is_full:
        raise ValueError(f"{what} runs on the full rings (kind=full); got kind={config.kind}")
    return ring


# ---------------------------------------------------------------------------
# command implementations (each returns a list of CheckReports)


def _cmd_theorem_b(config: RunConfig):
    return [verify_theoremB(_ring(config), config.bound)]


def _cmd_cotlar(config: RunConfig):
    ring = _require_full(config, "verify-cotlar")
    return [
        cotlar.verify_cotlar(
            ring,
            config.bound,
            pair_budget=config.pair_budget,
            seed=config.seed,
            threads=config.threads,
        )
    ]


def _cmd_invariance(config: RunConfig):
    ring = _require_full(config, "verify-invariance")
    return [
        cotlar.verify_invariance(ring, config.bound),
        cotlar.verify_chi_homomorphism(ring, config.bound),
        cotlar.verify_omega_relations(ring, config.bound),
        cotlar.verify_G0_invariance(config.samples, config.seed, config.tol),
        cotlar.verify_psu2_invariance(config.samples, config.seed, config.tol),
    ]


def _cmd_lemmas(config: RunConfig):
    ring = _ring(config)
    small = max(1, config.samples // 10)
    reports = [
        cotlar.verify_lemma21_float(config.samples, config.seed, config.tol),
        cotlar.verify_lemma21_exact(ring, config.bound),
        cotlar.verify_lemma32_float(config.samples, config.seed, config.tol),
    ]
    if ring.is_full:
        reports.append(cotlar.verify_lemma32_exact(ring, config.bound))
        reports.extend(cotlar.verify_lemma34_exact(ring, config.bound))
    reports.append(cotlar.verify_lemma23(small, config.seed, config.tol))
    if not ring.is_full:
        reports.append(
            cotlar.verify_remark_formula(ring, config.bound, small, config.seed, config.tol)
        )
    return reports


def _cmd_proof_terms(config: RunConfig):
    ring = _require_full(config, "verify-proof-terms")
    pairs = max(1, config.samples // 10)
    return [
        cotlar.verify_proof_terms(ring, config.bound, pairs, config.seed, config.tol)
    ]


def _cmd_counterexample(config: RunConfig):
    return [cotlar.search_bianchi_counterexample(config.n, config.bound)]


def _cmd_ank(config: RunConfig):
    return [
        ank.verify_ank_roundtrip(config.samples, config.seed, config.tol),
        ank.verify_kernel_t_imaginary(_ring(config), config.bound, config.tol),
    ]


def _cmd_norm_experiment(config: RunConfig):
    ring = _ring(config)
    rows = ncfourier.norm_ratio_experiment(
        ring,
        k_list=config.k_list,
        trials=config.trials,
        support_size=config.support_size,
        seed=config.seed,
        bound=config.bound,
        budget=config.budget,
    )
    report = CheckReport(
        check="norm-experiment",
        config={
            "n": config.n,
            "kind": config.kind,
            "bound": config.bound,
            "k_list": list(config.k_list),
            "trials": config.trials,
            "support_size": config.support_size,
            "seed": config.seed,
            "budget": config.budget,
        },
    )
    max_by_k: dict = {}
    for row in rows:
        report.total_checked += 1
        k = row["k"]
        max_by_k[str(k)] = max(max_by_k.get(str(k), 0.0), row["ratio"])
        if k == 1 and row["ratio"] > 1.0 + 1e-12:
            report.add_violation(
                [{"trial": row["trial"]}],
                {"k": 1, "ratio": row["ratio"], "reason": "L2 contraction exceeded"},
            )
    # the bound hides a universal constant; record the observed one
    c_report = max((row["ratio"] / row["theory_bound"] for row in rows), default=0.0)
    report.witness = {
        "beta": ncfourier.THEORY_BETA,
        "max_ratio_by_k": max_by_k,
        "c_report": c_report,
        "rows": rows,
    }
    return [report]


def _cmd_enumerate(config: RunConfig):
    elems = enumerate_box(_ring(config), config.bound)
    report = CheckReport(
        check="enumerate",
        config={"n": config.n, "kind": config.kind, "bound": config.bound},
        total_checked=len(elems),
    )
    report.witness = {"count": len(elems), "elements": [format_matrix(g) for g in elems]}
    return [report]


RUNNERS = {
    "verify-theorem-b": _cmd_theorem_b,
    "verify-cotlar": _cmd_cotlar,
    "verify-invariance": _cmd_invariance,
    "verify-lemmas": _cmd_lemmas,
    "verify-proof-terms": _cmd_proof_terms,
    "counterexample-bianchi": _cmd_counterexample,
    "ank-roundtrip": _cmd_ank,
    "norm-experiment": _cmd_norm_experiment,
    "enumerate": _cmd_enumerate,
}


def run(config: RunConfig) -> tuple[int, list[CheckReport]]:
    """Execute a command; returns (exit code, reports)."""
    if config.command == "replay":
        return _run_replay(config)
    try:
        reports = RUNNERS[config.command](config)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, []
    if config.command == "counterexample-bianchi":
        code = 0 if reports[0].witness is not None else 1
    else:
        code = 0 if all(r.ok for r in reports) else 1
    return code, reports


# ---------------------------------------------------------------------------
# serialization


def render_reports(config: RunConfig, reports: list[CheckReport]) -> str:
    if config.format == "json":
        objs = [r.to_dict(__version__, config.echo()) for r in reports]
        payload = objs[0] if len(objs) == 1 else objs
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if config.format == "csv":
        return _render_csv(config, reports)
    return _render_text(config, reports)


def _render_csv(config: RunConfig, reports: list[CheckReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if config.command == "norm-experiment":
        writer.writerow(["trial", "k", "p", "ratio", "norm_x", "norm_tx", "theory_bound"])
        for row in reports[0].witness["rows"]:
            writer.writerow([row[c] for c in ("trial", "k", "p", "ratio", "norm_x", "norm_tx", "theory_bound")])
        return buf.getvalue()
    if config.command == "enumerate":
        writer.writerow(["index", "matrix"])
        for i, m in enumerate(reports[0].witness["elements"]):
            writer.writerow([i, m])
        return buf.getvalue()
    writer.writerow(["check", "total_checked", "violations", "elapsed_ms", "version", "config", "witness"])
    for r in reports:
        d = r.to_dict(__version__, config.echo())
        writer.writerow(
            [
                d["check"],
                d["total_checked"],
                len(d["violations"]),
                d["elapsed_ms"],
                d["version"],
                json.dumps(d["config"], sort_keys=True),
                json.dumps(d["witness"], sort_keys=True),
            ]
        )
    return buf.getvalue()


def _render_text(config: RunConfig, reports: list[CheckReport]) -> str:
    if config.command == "enumerate":
        return "\n".join(reports[0].witness["elements"]) + "\n"
    lines = []
    for r in reports:
        status = "PASS" if r.ok else "FAIL"
        if config.command == "counterexample-bianchi":
            status = "FOUND" if r.witness is not None else "NOT FOUND"
        lines.append(
            f"[{r.check}] {status} checked={r.total_checked} "
            f"violations={len(r.violations)} elapsed={r.elapsed_ms}ms"
        )
        for v in r.violations[:5]:
            lines.append(f"  violation inputs={v['inputs']} observed={v['observed']}")
        if len(r.violations) > 5:
            lines.append(f"  ... {len(r.violations) - 5} more")
        if r.witness is not None and config.command != "enumerate":
            w = {k: v for k, v in r.witness.items() if k != "rows"}
            lines.append(f"  witness: {json.dumps(w, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _write_output(config: RunConfig, text: str) -> None:
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# figures alongside the delimited output


def _plot_stem(config: RunConfig) -> str:
    if config.output:
        stem, _, _ = config.output.rpartition(".")
        return stem or config.output
    return f"cotlar_lab_{config.command}"


def _maybe_plots(config: RunConfig, reports: list[CheckReport]) -> list[str]:
    if not config.plots:
        return []
    from . import plots

    stem = _plot_stem(config)
    written = []
    if config.command == "norm-experiment":
        path = f"{stem}_ratios.png"
        plots.save_norm_experiment(reports[0].witness["rows"], path)
        written.append(path)
    elif config.command == "verify-lemmas":
        cap = min(config.samples, 20000)
        rng = _random.Random(config.seed)
        prods, lhss = [], []
        for _ in range(cap):
            g = random_psl2c(rng=rng)
            prods.append(cotlar.check_lemma21(g, config.tol)["product"])
            lhss.append(cotlar.check_lemma32(g, config.tol)["lhs"])
        path = f"{stem}_lemma21.png"
        plots.save_histogram(
            prods, path, "Column scalar products on PSL2(C) samples",
            "Re(a c*) Re(b d*)", vline=-0.25,
        )
        written.append(path)
        path = f"{stem}_lemma32.png"
        plots.save_histogram(
            lhss, path, "Quadratic-form LHS on PSL2(C) samples",
            "Im(b c* - a d*)^2 - 4 Re(a c*) Re(b d*)", vline=1.0,
        )
        written.append(path)
    elif config.command == "ank-roundtrip":
        cap = min(config.samples, 20000)
        rng = _random.Random(config.seed)
        errs = []
        for _ in range(cap):
            g = random_psl2c(rng=rng)
            errs.append(ank.reconstruction_error(g, ank.ank_decompose(g, config.tol)))
        path = f"{stem}_errors.png"
        plots.save_histogram(
            errs, path, "Triangular-unitary round-trip error", "max entry deviation"
        )
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# replay


def _replay_exact_pair(inputs):
    g = parse_matrix(inputs[0])
    h = parse_matrix(inputs[1])
    return g, h


def _replay_cotlar(inputs, observed, config):
    g, h = _replay_exact_pair(inputs)
    return {
        "residual": cotlar.cotlar_residual(g, h),
        "m_g": m_exact(g),
        "m_ginv": m_exact(g.inverse()),
        "m_h": m_exact(h),
        "m_gh": m_exact(g * h),
    }


def _replay_theorem_b(inputs, observed, config):
    g = parse_matrix(inputs[0])
    return {"m": m_exact(g), "class": kernel_class(g).value}


def _replay_invariance(inputs, observed, config):
    g, h = _replay_exact_pair(inputs)
    out = {"m_g": m_exact(g)}
    if observed.get("law") == "right":
        out["m_gh"] = m_exact(g * h)
    else:
        out["m_hg"] = m_exact(h * g)
    return out


def _replay_chi_hom(inputs, observed, config):
    from .symbol import chi

    h1, h2 = _replay_exact_pair(inputs)
    prod = h1 * h2
    out = {"class": kernel_class(prod).value}
    if "chi_prod" in observed:
        out.update(chi_h1=chi(h1), chi_h2=chi(h2), chi_prod=chi(prod))
    return out


def _replay_omega(inputs, observed, config):
    g = parse_matrix(inputs[0])
    from .psl2 import omega as _omega

    return {"m_g": m_exact(g), "m_wg": m_exact(_omega(g.ring) * g)}


def _replay_lemma21_exact(inputs, observed, config):
    g = parse_matrix(inputs[0])
    return {"scaled_product": cotlar.check_lemma21(g)["scaled_product"]}


def _replay_lemma32_exact(inputs, observed, config):
    g = parse_matrix(inputs[0])
    entry = cotlar.check_lemma32(g)
    return {"lhs16": entry["lhs16"], "rhs16": entry["rhs16"], "x": entry["x"]}


def _replay_lemma34(inputs, observed, config):
    g = parse_matrix(inputs[0])
    entry = cotlar.check_lemma34(g)
    keys = [k for k in ("m_g", "m_gt", "scaled_re_ad_bc", "lhs64", "rhs64") if k in observed]
    return {k: entry[k] for k in keys}


def _replay_lemma21_float(inputs, observed, config):
    g = parse_cmatrix(inputs[0]["cmatrix"])
    return {"product": cotlar.check_lemma21(g, config.get("tol", 1e-9))["product"]}


def _replay_lemma32_float(inputs, observed, config):
    g = parse_cmatrix(inputs[0]["cmatrix"])
    return {"lhs": cotlar.check_lemma32(g, config.get("tol", 1e-9))["lhs"]}


def _replay_float_invariance(inputs, observed, config):
    from .psl2 import cm_mul
    from .symbol import m_arg_float

    other = parse_cmatrix(inputs[0]["cmatrix"])
    g = parse_cmatrix(inputs[1]["cmatrix"])
    if config.get("check") == "psu2-invariance":
        prod = cm_mul(g, other)
    else:
        prod = cm_mul(other, g)
    return {"arg_g": m_arg_float(g), "arg_prod": m_arg_float(prod)}


def _replay_lemma23(inputs, observed, config):
    g = parse_cmatrix(inputs[0]["cmatrix"])
    entry = cotlar.check_lemma23(g, config.get("tol", 1e-9))
    return {"item1_ok": entry["item1_ok"], "item2_ok": entry["item2_ok"]}


def _replay_remark(inputs, observed, config):
    l = parse_matrix(inputs[0])
    g = parse_cmatrix(inputs[1]["cmatrix"])
    entry = cotlar.check_remark_formula(l, g, config.get("tol", 1e-9))
    return {"lhs_arg": entry["lhs_arg"], "rhs_arg": entry["rhs_arg"]}


def _replay_proof_terms(inputs, observed, config):
    g, h = _replay_exact_pair(inputs)
    t1, t2, t3 = cotlar.proof_terms(g, h, config.get("tol", 1e-9))
    return {"I": t1, "II": t2, "III": t3, "m_g": m_exact(g), "m_gh": m_exact(g * h)}


REPLAY_HANDLERS = {
    "cotlar": _replay_cotlar,
    "theorem-b": _replay_theorem_b,
    "invariance": _replay_invariance,
    "chi-homomorphism": _replay_chi_hom,
    "omega-relations": _replay_omega,
    "lemma21-exact": _replay_lemma21_exact,
    "lemma32-exact": _replay_lemma32_exact,
    "lemma34-exact": _replay_lemma34,
    "lemma34-poly-identity": _replay_lemma34,
    "lemma21-float": _replay_lemma21_float,
    "lemma32-float": _replay_lemma32_float,
    "g0-invariance": _replay_float_invariance,
    "psu2-invariance": _replay_float_invariance,
    "lemma23": _replay_lemma23,
    "remark-lplus-formula": _replay_remark,
    "proof-terms": _replay_proof_terms,
}


def _replay_witness(check: str, witness: dict) -> tuple[int, int]:
    """Re-verify a witness block; returns (checked, failures)."""
    if check == "counterexample-bianchi" and witness.get("l"):
        l = parse_matrix(witness["l"])
        hp = parse_matrix(witness["h"])
        recomputed = {
            "residual": cotlar.cotlar_residual(l, hp),
            "m_l_inv": m_exact(l.inverse()),
            "m_h": m_exact(hp),
            "m_lh": m_exact(l * hp),
            "m_l": m_exact(l),
        }
        bad = sum(1 for k, v in recomputed.items() if witness.get(k) != v)
        if witness.get("residual") == 0:
            bad += 1
        return 1, 1 if bad else 0
    if witness.get("kind") == "extremal" and witness.get("cmatrix"):
        g = parse_cmatrix(witness["cmatrix"])
        if "min_product" in witness:
            val = cotlar.check_lemma21(g)["product"]
            return 1, 0 if val == witness["min_product"] else 1
        if "max_lhs" in witness:
            val = cotlar.check_lemma32(g)["lhs"]
            return 1, 0 if val == witness["max_lhs"] else 1
    return 0, 0


def _run_replay(config: RunConfig) -> tuple[int, list[CheckReport]]:
    if not config.input:
        print("error: replay needs --input <report.json>", file=sys.stderr)
        return 2, []
    try:
        with open(config.input, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return 2, []
    reports = payload if isinstance(payload, list) else [payload]
    summary = CheckReport(check="replay", config={"input": config.input})
    for rep in reports:
        check = rep.get("check", "")
        handler = REPLAY_HANDLERS.get(check)
        rep_config = dict(rep.get("config", {}))
        rep_config["check"] = check
        for v in rep.get("violations", []):
            summary.total_checked += 1
            if handler is None or not v.get("inputs"):
                summary.add_violation(
                    [check], {"reason": "no replay handler or inputs", "entry": v}
                )
                continue
            try:
                recomputed = handler(v["inputs"], v["observed"], rep_config)
            except Exception as exc:  # malformed inputs are replay failures
                summary.add_violation([check], {"reason": f"replay error: {exc}"})
                continue
            mismatches = {
                k: [v["observed"].get(k), val]
                for k, val in recomputed.items()
                if v["observed"].get(k) != val
            }
            if mismatches:
                summary.add_violation([check], {"mismatches": mismatches})
        if rep.get("witness"):
            checked, failed = _replay_witness(check, rep["witness"])
            summary.total_checked += checked
            if failed:
                summary.add_violation([check], {"reason": "witness did not re-verify"})
    return (0 if summary.ok else 1), [summary]


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cotlar-lab",
        description="Exact verification lab for the half-space sign multiplier "
        "on PSL2 lattices and Bianchi groups.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_ring=True):
        if needs_ring:
            p.add_argument("--n", type=int, default=2, help="ring parameter n (default 2)")
            p.add_argument("--kind", choices=["full", "max"], default="full",
                           help="full = Z[sqrt(-n)], max = maximal order (default full)")
            p.add_argument("--bound", "-B", type=int, default=2,
                           help="enumeration box bound (default 2)")
        p.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
        p.add_argument("--tol", type=float, default=1e-9, help="float tolerance (default 1e-9)")
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")
        p.add_argument("--output", "-o", default=None, help="write report here (default stdout)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker count (default $COTLAR_LAB_THREADS or 1)")
        p.add_argument("--plots", action="store_true",
                       help="render figures next to the output file")

    p = sub.add_parser("verify-theorem-b", help="kernel decomposition as a set equality")
    common(p)
    p = sub.add_parser("verify-cotlar", help="Cotlar residual sweep on a full-ring lattice")
    common(p)
    p.add_argument("--pair-budget", type=int, default=10**6, dest="pair_budget",
                   help="max deterministic pairs (default 1e6)")
    p = sub.add_parser("verify-invariance", help="kernel invariance laws, exact and float")
    common(p)
    p.add_argument("--samples", type=int, default=10**5,
                   help="float samples per invariance check (default 1e5)")
    p = sub.add_parser("verify-lemmas", help="lemma inequalities and identities")
    common(p)
    p.add_argument("--samples", type=int, default=10**5,
                   help="float samples; conditioned checks use samples/10 (default 1e5)")
    p = sub.add_parser("verify-proof-terms", help="main-proof sign decomposition")
    common(p)
    p.add_argument("--samples", type=int, default=10**5,
                   help="qualifying pairs = samples/10 (default 1e5 -> 1e4 pairs)")
    p = sub.add_parser("counterexample-bianchi", help="search a Cotlar failure witness")
    common(p)
    p = sub.add_parser("ank-roundtrip", help="triangular-unitary decomposition checks")
    common(p)
    p.add_argument("--samples", type=int, default=10**5)
    p = sub.add_parser("norm-experiment", help="empirical multiplier norm ratios")
    common(p)
    p.add_argument("--k-list", default="1,2,3", dest="k_list",
                   help="comma-separated k values (default 1,2,3)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--support-size", type=int, default=20, dest="support_size")
    p.add_argument("--budget", type=int, default=10**5,
                   help="support-size budget for convolution powers (default 1e5)")
    p = sub.add_parser("enumerate", help="list the enumeration box")
    common(p)
    p = sub.add_parser("replay", help="re-verify witnesses from a report file")
    p.add_argument("--input", required=True, help="report JSON to replay")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--output", "-o", default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    threads = getattr(args, "threads", None)
    if threads is None:
        threads = int(os.environ.get("COTLAR_LAB_THREADS", "1"))
    k_list = getattr(args, "k_list", (1, 2, 3))
    if isinstance(k_list, str):
        k_list = tuple(int(v) for v in k_list.split(",") if v)
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", 2),
        kind=getattr(args, "kind", "full"),
        bound=getattr(args, "bound", 2),
        pair_budget=getattr(args, "pair_budget", 10**6),
        samples=getattr(args, "samples", 10**5),
        seed=getattr(args, "seed", 42),
        tol=getattr(args, "tol", 1e-9),
        format=getattr(args, "format", "json"),
        output=getattr(args, "output", None),
        threads=max(1, threads),
        plots=getattr(args, "plots", False),
        k_list=k_list,
        trials=getattr(args, "trials", 100),
        support_size=getattr(args, "support_size", 20),
        budget=getattr(args, "budget", 10**5),
        input=getattr(args, "input", None),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    code, reports = run(config)
    if reports:
        _write_output(config, render_reports(config, reports))
        for path in _maybe_plots(config, reports):
            print(f"wrote {path}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
