"""命令行入口：integrate / check / sweep / paper-examples / emit-plot"""
import logging
import os
from dataclasses import asdict
from functools import wraps
from typing import Callable, List, Optional

import click
import numpy as np

from src.backend.expr import parse, print_canonical
from src.backend.harness import paper_examples, paper_integral_note, sweep
from src.backend.ineq import run_check
from src.backend.measure import parse_measure
from src.backend.models import FamilyName, FamilySpec, IneqConfig, IneqId, Interval, LevelSetOptions
from src.backend.quad import integrate
from src.backend.sugeno import alpha_upper_bound, distribution_curve, sugeno_integral
from src.common import config, messages
from src.common.errors import SugenoError
from src.common.log import setup_logging
from src.frontend import report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
CHECK_IDS = ("pk1", "pk2", "gpk", "hk", "jensen")
SWEEP_IDS = ("pk1", "pk2", "hk", "jensen")
INNER_KINDS = ("riemann", "sugeno")
_IDS = {"pk1": IneqId.PK1, "pk2": IneqId.PK2, "hk": IneqId.HK, "jensen": IneqId.JENSEN_PROBE}
REPORT_COLUMNS = ["id", "lhs", "rhs", "slack", "holds", "exploratory"]
SWEEP_COLUMNS = ["id", "trials", "violations", "errors", "min_slack", "seed", "family"]


# ---------- 公共选项 ----------
def tolerance_options(func):
    options = [
        click.option("--tol", type=float, default=config.SOLVER_TOL,
                     help=messages.OPT_TOL.format(default=config.SOLVER_TOL)),
        click.option("--quad-tol", type=float, default=config.QUAD_TOL,
                     help=messages.OPT_QUAD_TOL.format(default=config.QUAD_TOL)),
        click.option("--violation-tol", type=float, default=config.VIOLATION_TOL,
                     help=messages.OPT_VIOLATION_TOL.format(default=config.VIOLATION_TOL)),
        click.option("--scan-points", type=int, default=config.SCAN_POINTS,
                     help=messages.OPT_SCAN_POINTS.format(default=config.SCAN_POINTS)),
        click.option("--root-tol", type=float, default=config.ROOT_TOL,
                     help=messages.OPT_ROOT_TOL.format(default=config.ROOT_TOL)),
        click.option("--cap", type=float, default=config.ALPHA_CAP,
                     help=messages.OPT_CAP.format(default=config.ALPHA_CAP)),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def output_options(func):
    func = click.option("--out", type=click.Path(dir_okay=False), default=None, help=messages.OPT_OUT)(func)
    return click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                        show_default=True, help=messages.OPT_FORMAT)(func)


def domain_option(default=None):
    return click.option("--domain", nargs=2, type=float, required=default is None, default=default,
                        help=messages.OPT_DOMAIN)


def _guard(func):
    """业务异常转为退出码：输入错误 2，数值失败 3"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            code = func(*args, **kwargs)
        except SugenoError as exc:
            logger.debug("命令失败", exc_info=True)
            click.echo(messages.ERR_PREFIX + str(exc), err=True)
            ctx.exit(exc.exit_code)
        ctx.exit(code or EXIT_OK)
    return wrapper


def _ineq_config(tol: float, quad_tol: float, violation_tol: float, scan_points: int, root_tol: float,
                 cap: float) -> IneqConfig:
    return IneqConfig(
        violation_tol=violation_tol,
        solver_tol=tol,
        quad_tol=quad_tol,
        cap=cap,
        level_set=LevelSetOptions(scan_points, root_tol),
    )


def _emit(doc: dict, fmt: str, out: Optional[str], csv_text: Callable[[], str]):
    text = report.to_json(doc) + "\n" if fmt == "json" else csv_text()
    if out:
        report.write_text(text, out)
    else:
        click.echo(text, nl=False)


# ---------- 主命令组 ----------
@click.group(help=messages.HELP_MAIN)
@click.version_option(config.VERSION, prog_name=messages.APP_NAME)
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default="WARNING",
              show_default=True, help=messages.OPT_LOG_LEVEL)
def cli(log_level: str):
    setup_logging(log_level)


@cli.group("integrate", help=messages.HELP_INTEGRATE)
def integrate_group():
    pass


@integrate_group.command("sugeno", help=messages.HELP_INTEGRATE_SUGENO)
@click.option("--f", "f_text", required=True, help=messages.OPT_F)
@domain_option()
@click.option("--measure", "measure_text", default="uniform", show_default=True, help=messages.OPT_MEASURE)
@tolerance_options
@output_options
@_guard
def integrate_sugeno(f_text, domain, measure_text, tol, quad_tol, violation_tol, scan_points, root_tol, cap,
                     fmt, out):
    f = parse(f_text)
    A = Interval(*domain)
    m = parse_measure(measure_text)
    cfg = _ineq_config(tol, quad_tol, violation_tol, scan_points, root_tol, cap)
    value = sugeno_integral(f, A, m, cfg.solver_tol, cfg.level_set, cfg.cap, cfg.measure_tol)
    run_config = {"f": print_canonical(f), "domain": list(domain), "measure": m.to_text(), **cfg.to_dict()}
    doc = report.envelope("integrate sugeno", run_config, value.to_dict(), paper_integral_note(f, A, value.value))
    _emit(doc, fmt, out, lambda: report.record_csv(value.to_dict()))
    return EXIT_OK


@integrate_group.command("riemann", help=messages.HELP_INTEGRATE_RIEMANN)
@click.option("--f", "f_text", required=True, help=messages.OPT_F)
@domain_option()
@click.option("--tol", "quad_tol", type=float, default=config.QUAD_TOL,
              help=messages.OPT_QUAD_TOL.format(default=config.QUAD_TOL))
@output_options
@_guard
def integrate_riemann(f_text, domain, quad_tol, fmt, out):
    f = parse(f_text)
    result = asdict(integrate(f, domain[0], domain[1], quad_tol))
    run_config = {"f": print_canonical(f), "domain": list(domain), "quad_tol": quad_tol,
                  "max_subdivisions": config.QUAD_MAX_SUBDIVISIONS}
    _emit(report.envelope("integrate riemann", run_config, result), fmt, out,
          lambda: report.record_csv(result))
    return EXIT_OK


# ---------- 不等式校验 ----------
@cli.command("check", help=messages.HELP_CHECK)
@click.argument("ineq", type=click.Choice(CHECK_IDS))
@click.option("--f", "f_text", required=True, help=messages.OPT_F)
@click.option("--phi", "phi_text", default=None, help=messages.OPT_PHI)
@click.option("--bij", "bij_text", default=None, help=messages.OPT_BIJ)
@click.option("--inner", type=click.Choice(INNER_KINDS), default="riemann", show_default=True,
              help=messages.OPT_INNER)
@click.option("--measure", "measure_text", default="uniform", show_default=True, help=messages.OPT_GPK_MEASURE)
@domain_option()
@tolerance_options
@output_options
@_guard
def check(ineq, f_text, phi_text, bij_text, inner, measure_text, domain, tol, quad_tol, violation_tol,
          scan_points, root_tol, cap, fmt, out):
    f = parse(f_text)
    phi = parse(phi_text) if phi_text is not None else None
    bij = parse(bij_text) if bij_text is not None else None
    m = parse_measure(measure_text)
    A = Interval(*domain)
    cfg = _ineq_config(tol, quad_tol, violation_tol, scan_points, root_tol, cap)
    if ineq == "gpk":
        ineq_id = IneqId.GPK1 if inner == "riemann" else IneqId.GPK2
    else:
        ineq_id = _IDS[ineq]

    result = run_check(ineq_id, f, A, cfg, phi=phi, bij=bij, outer_measure=m)
    run_config = {
        "ineq": ineq_id.value,
        "f": print_canonical(f),
        "phi": print_canonical(phi) if phi is not None else None,
        "bij": print_canonical(bij) if bij is not None else None,
        "inner": inner,
        "measure": m.to_text(),
        "domain": list(domain),
        **cfg.to_dict(),
    }
    doc = report.envelope(f"check {ineq}", run_config, result.to_dict(), result.notes)
    _emit(doc, fmt, out, lambda: report.record_csv(result.to_dict(), REPORT_COLUMNS))
    return EXIT_OK if result.holds or result.exploratory else EXIT_VIOLATED


# ---------- 批量校验 ----------
@cli.command("sweep", help=messages.HELP_SWEEP)
@click.argument("ineq", type=click.Choice(SWEEP_IDS))
@click.option("--family", type=click.Choice([f.value for f in FamilyName]), required=True,
              help=messages.OPT_FAMILY)
@click.option("--base", type=click.Choice([f.value for f in FamilyName if f is not FamilyName.SHIFTED]),
              default=FamilyName.AFFINE_INCREASING.value,
              help=messages.OPT_BASE.format(default=FamilyName.AFFINE_INCREASING.value))
@click.option("--trials", type=click.IntRange(min=1), default=100, show_default=True, help=messages.OPT_TRIALS)
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True, help=messages.OPT_SEED)
@domain_option(default=config.DEFAULT_SWEEP_DOMAIN)
@click.option("--jobs", type=click.IntRange(min=1), default=os.cpu_count() or 1, help=messages.OPT_JOBS)
@tolerance_options
@output_options
@_guard
def sweep_command(ineq, family, base, trials, seed, domain, jobs, tol, quad_tol, violation_tol, scan_points,
                  root_tol, cap, fmt, out):
    A = Interval(*domain)
    cfg = _ineq_config(tol, quad_tol, violation_tol, scan_points, root_tol, cap)
    spec = FamilySpec(FamilyName(family), trials, seed, base=FamilyName(base), probe_domain=tuple(domain))
    ineq_id = _IDS[ineq]
    result = sweep(ineq_id, spec, A, cfg, jobs)
    run_config = {"ineq": ineq_id.value, "domain": list(domain), "spec": spec.to_dict(), "jobs": jobs,
                  **cfg.to_dict()}
    doc = report.envelope(f"sweep {ineq}", run_config, result.to_dict())
    _emit(doc, fmt, out, lambda: report.record_csv(result.to_dict(), SWEEP_COLUMNS))
    if result.violations and ineq_id is not IneqId.JENSEN_PROBE:
        return EXIT_VIOLATED
    return EXIT_OK


# ---------- 文献算例 ----------
@cli.command("paper-examples", help=messages.HELP_PAPER_EXAMPLES)
@tolerance_options
@output_options
@_guard
def paper_examples_command(tol, quad_tol, violation_tol, scan_points, root_tol, cap, fmt, out):
    cfg = _ineq_config(tol, quad_tol, violation_tol, scan_points, root_tol, cap)
    reports = paper_examples(cfg)
    result = [r.to_dict() for r in reports]
    doc = report.envelope("paper-examples", cfg.to_dict(), result, " ".join(r.notes for r in reports))
    _emit(doc, fmt, out, lambda: report.table_csv(
        REPORT_COLUMNS, [[r.get(c) for c in REPORT_COLUMNS] for r in result]))
    return EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATED


# ---------- 画图数据 ----------
@cli.command("emit-plot", help=messages.HELP_EMIT_PLOT)
@click.option("--f", "f_text", required=True, help=messages.OPT_F)
@domain_option()
@click.option("--measure", "measure_text", default="uniform", show_default=True, help=messages.OPT_MEASURE)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help=messages.OPT_OUT)
@click.option("--points", type=click.IntRange(min=2), default=config.PLOT_POINTS,
              help=messages.OPT_POINTS.format(default=config.PLOT_POINTS))
@tolerance_options
@_guard
def emit_plot(f_text, domain, measure_text, out, points, tol, quad_tol, violation_tol, scan_points, root_tol, cap):
    f = parse(f_text)
    A = Interval(*domain)
    m = parse_measure(measure_text)
    cfg = _ineq_config(tol, quad_tol, violation_tol, scan_points, root_tol, cap)
    alpha_max = alpha_upper_bound(f, A, m, cfg.level_set, cfg.cap, cfg.measure_tol)
    alphas = np.linspace(0.0, alpha_max, points) if alpha_max > 0 else np.zeros(1)
    F = distribution_curve(f, A, m, alphas, cfg.level_set, cfg.measure_tol)
    report.write_text(report.plot_csv(alphas, F), out)
    value = sugeno_integral(f, A, m, cfg.solver_tol, cfg.level_set, cfg.cap, cfg.measure_tol)
    run_config = {"f": print_canonical(f), "domain": list(domain), "measure": m.to_text(), "points": points,
                  "out": out, **cfg.to_dict()}
    result = {"rows": int(alphas.size), "alpha_max": alpha_max, "sugeno": value.to_dict()}
    click.echo(report.to_json(report.envelope("emit-plot", run_config, result)))
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    """解析 argv 并执行一条命令，返回退出码"""
    try:
        return cli.main(args=argv, prog_name=messages.APP_NAME, standalone_mode=False) or EXIT_OK
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo(messages.ERR_PREFIX + messages.ERR_ABORTED, err=True)
        return SugenoError.exit_code
