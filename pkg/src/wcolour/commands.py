"""CLI commands for wcolour.

Results go to stdout (edge lists, integers, true/false, JSON objects, CSV or
JSON Lines records); diagnostics, banners and progress go to stderr. Exit codes:
0 success, 1 failed internal check, 2 invalid input, 3 inconclusive exact search.
"""

import importlib.metadata
import json
import platform
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional

import typer
from rich.live import Live
from rich.panel import Panel
from rich.table import Table

from .colouring import (
    Colouring,
    exact_chi_w,
    greedy_colour,
    random_order,
    two_stage_colour,
    verify_weighted,
)
from .config import EXIT_CONTRACT, EXIT_INCONCLUSIVE, PATTERN_CONFIG, load_user_defaults
from .errors import ContractViolation, InvalidInputError
from .experiments import ExperimentConfig, cells, emit, run
from .graph import (
    EdgeWeightMap,
    Graph,
    format_edge_list,
    format_weights,
    gen_gnp,
    p_from_beta,
    read_edge_list,
    read_weights,
)
from .patterns import PatternGraph, count_copies, enumerate_copies, is_balanced, resolve_pattern
from .seeding import Seed
from .system_utils import environment_info, resolve_workers
from .threshold import ThresholdParams, colouring_is_good, exhaustive_good_fraction, sample_goodness
from .ui import (
    StepTracker,
    app,
    cli_state,
    console,
    err_console,
    fail,
    show_banner,
    show_debug_environment,
)
from .weights import WeightDistributionSpec, sample_weights


@contextmanager
def _errors(workers: Optional[int] = None):
    """Map library errors onto exit codes."""
    try:
        yield
    except (InvalidInputError, OSError) as e:
        if cli_state["debug"]:
            show_debug_environment(environment_info(workers))
        fail(str(e))
    except ContractViolation as e:
        if cli_state["debug"]:
            show_debug_environment(environment_info(workers))
        fail(f"internal check failed: {e}", code=EXIT_CONTRACT)


def _echo_json(data) -> None:
    typer.echo(json.dumps(data))


def _load_graph(graph_path: Path, weights_path: Optional[Path]) -> tuple[Graph, EdgeWeightMap]:
    g = read_edge_list(graph_path)
    w = read_weights(weights_path, g) if weights_path else EdgeWeightMap.constant(g)
    return g, w


def _load_pattern(pattern: Optional[str], pattern_file: Optional[Path]) -> PatternGraph:
    if pattern and pattern_file:
        raise InvalidInputError("give either --pattern or --pattern-file, not both")
    if pattern_file:
        return PatternGraph.read(pattern_file)
    return resolve_pattern(pattern or "triangle")


def _edge_probability(n: int, p: Optional[float], beta: Optional[float]) -> float:
    if p is not None and beta is not None:
        raise InvalidInputError("--p and --beta are mutually exclusive")
    if p is None and beta is None:
        raise InvalidInputError("one of --p and --beta is required")
    return p if p is not None else p_from_beta(n, beta)


@app.command()
def gen(
    n: int = typer.Option(..., "--n", help="Number of vertices"),
    p: Optional[float] = typer.Option(None, "--p", help="Edge probability"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Edge probability as p = n^(-beta)"),
    dist: Optional[str] = typer.Option(None, "--dist", help="Weight law, e.g. 'constant:1' or 'pareto:6'"),
    seed: int = typer.Option(0, "--seed", help="Master seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Edge list file (default: stdout)"),
    weights_out: Optional[Path] = typer.Option(None, "--weights-out", help="Weights file (required with --dist)"),
):
    """
    Sample G(n, p) and, with --dist, i.i.d. edge weights.

    Examples:
        wcolour gen --n 5 --p 1 --seed 7
        wcolour gen --n 200 --beta 0.3 --dist pareto:6 --out g.el --weights-out w.el
    """
    with _errors():
        if dist and not weights_out:
            raise InvalidInputError("--dist needs --weights-out")
        g = gen_gnp(n, _edge_probability(n, p, beta), Seed(seed).child(0))
        if out:
            out.write_text(format_edge_list(g), encoding="utf-8")
        else:
            typer.echo(format_edge_list(g), nl=False)
        if dist:
            w = sample_weights(g, WeightDistributionSpec.parse(dist), Seed(seed).child(1))
            weights_out.write_text(format_weights(w), encoding="utf-8")


@app.command()
def colour(
    graph: Path = typer.Option(..., "--graph", help="Edge list file"),
    weights: Optional[Path] = typer.Option(None, "--weights", help="Weights file (default: every weight 1)"),
    method: str = typer.Option("greedy", "--method", help="greedy or two-stage"),
    order: str = typer.Option("id", "--order", help="Greedy vertex order: id or random"),
    seed: int = typer.Option(0, "--seed", help="Seed for --order random"),
    mu: Optional[float] = typer.Option(None, "--mu", help="Mean weight for two-stage (default: from --dist)"),
    dist: Optional[str] = typer.Option(None, "--dist", help="Weight law whose mean is used as --mu"),
    p: Optional[float] = typer.Option(None, "--p", help="Edge probability for two-stage (default: edge density)"),
    eps: float = typer.Option(0.3, "--eps", help="Slack in the two-stage threshold, in (0, 1/2)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Also write the colouring ('v colour' lines)"),
):
    """Colour a weighted graph and print a JSON summary."""
    with _errors():
        g, w = _load_graph(graph, weights)
        if method == "greedy":
            if order not in ("id", "random"):
                raise InvalidInputError(f"--order must be 'id' or 'random', got '{order}'")
            vertex_order = random_order(g.n, Seed(seed).child(3)) if order == "random" else None
            f = greedy_colour(g, w, vertex_order)
            result = {"method": method, "max_colour": f.max_colour}
        elif method == "two-stage":
            if mu is None:
                if not dist:
                    raise InvalidInputError("two-stage needs --mu or --dist")
                mu = WeightDistributionSpec.parse(dist).mean()
            f, report = two_stage_colour(g, w, mu, g.edge_density() if p is None else p, eps)
            result = {"method": method, "max_colour": f.max_colour, "report": json.loads(report.to_json())}
        else:
            raise InvalidInputError(f"--method must be 'greedy' or 'two-stage', got '{method}'")
        result["valid"] = verify_weighted(g, w, f)
        result["colouring"] = list(f.colours)
        if out:
            f.write(out)
        _echo_json(result)


@app.command()
def exact(
    graph: Path = typer.Option(..., "--graph", help="Edge list file"),
    weights: Optional[Path] = typer.Option(None, "--weights", help="Weights file (default: every weight 1)"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Search node budget"),
):
    """Print the weighted colouring number; exits 3 with a JSON upper bound if the budget runs out."""
    with _errors():
        g, w = _load_graph(graph, weights)
        result = exact_chi_w(g, w, budget)
    if not result.proven:
        _echo_json({"chi_w_upper": result.chi_w, "proven": False, "nodes": result.nodes})
        raise typer.Exit(EXIT_INCONCLUSIVE)
    typer.echo(str(result.chi_w))


@app.command()
def verify(
    graph: Path = typer.Option(..., "--graph", help="Edge list file"),
    weights: Optional[Path] = typer.Option(None, "--weights", help="Weights file (default: every weight 1)"),
    colouring: Path = typer.Option(..., "--colouring", help="Colouring file ('v colour' lines)"),
):
    """Print true iff the colouring is a proper weighted colouring."""
    with _errors():
        g, w = _load_graph(graph, weights)
        ok = verify_weighted(g, w, Colouring.read(colouring))
    typer.echo("true" if ok else "false")


@app.command()
def balanced(
    pattern: Optional[str] = typer.Option(None, "--pattern", help=f"Built-in pattern ({', '.join(PATTERN_CONFIG)})"),
    pattern_file: Optional[Path] = typer.Option(None, "--pattern-file", help="Pattern edge list file"),
):
    """Print true iff the pattern is balanced."""
    with _errors():
        gamma = _load_pattern(pattern, pattern_file)
        typer.echo("true" if is_balanced(gamma) else "false")


@app.command()
def copies(
    graph: Path = typer.Option(..., "--graph", help="Edge list file"),
    pattern: Optional[str] = typer.Option(None, "--pattern", help=f"Built-in pattern ({', '.join(PATTERN_CONFIG)})"),
    pattern_file: Optional[Path] = typer.Option(None, "--pattern-file", help="Pattern edge list file"),
    list_copies: bool = typer.Option(False, "--list", help="Print one JSON object per copy instead of the count"),
):
    """Count (or list) the copies of a pattern in a graph."""
    with _errors():
        g = read_edge_list(graph)
        gamma = _load_pattern(pattern, pattern_file)
        if not list_copies:
            typer.echo(str(count_copies(g, gamma)))
            return
        for t in enumerate_copies(g, gamma):
            _echo_json({"vertices": list(t.vertices), "edges": [list(e) for e in t.edges]})


@app.command("good-fraction")
def good_fraction(
    graph: Path = typer.Option(..., "--graph", help="Edge list file"),
    weights: Optional[Path] = typer.Option(None, "--weights", help="Weights file (default: every weight 1)"),
    pattern: Optional[str] = typer.Option(None, "--pattern", help=f"Built-in pattern ({', '.join(PATTERN_CONFIG)})"),
    pattern_file: Optional[Path] = typer.Option(None, "--pattern-file", help="Pattern edge list file"),
    r: Optional[int] = typer.Option(None, "--r", help="Number of colours"),
    theta: Optional[float] = typer.Option(None, "--theta", help="Number of colours as r = ceil(n^theta)"),
    dist: str = typer.Option("constant:1", "--dist", help="Weight law used to pick the default K"),
    k: Optional[int] = typer.Option(None, "--K", help="Weight cut-off for the Y counter"),
    m: Optional[int] = typer.Option(None, "--M", help="Colour spread allowed on copy edges (default v0 (K+1))"),
    trials: int = typer.Option(200, "--trials", help="Random colourings to sample"),
    seed: int = typer.Option(0, "--seed", help="Master seed"),
    exhaustive: bool = typer.Option(False, "--exhaustive", help="Visit every colouring instead of sampling"),
    colouring: Optional[Path] = typer.Option(None, "--colouring", help="Score this one colouring instead"),
):
    """Fraction of r-colourings with at least one M-good copy of the pattern, as JSON."""
    with _errors():
        g, w = _load_graph(graph, weights)
        gamma = _load_pattern(pattern, pattern_file)
        if colouring is not None:
            params = ThresholdParams.resolve(g.n, gamma, WeightDistributionSpec.parse(dist), r=1, k=k, m=m)
            report = colouring_is_good(g, w, gamma, Colouring.read(colouring), params.M, k=params.K)
            typer.echo(report.to_json())
            return

        params = ThresholdParams.resolve(
            g.n, gamma, WeightDistributionSpec.parse(dist), theta=theta, r=r, k=k, m=m
        )
        result = {"r": params.r, "K": params.K, "M": params.M}
        if exhaustive:
            result["fraction"] = exhaustive_good_fraction(g, w, gamma, params.r, params.M)
            result["exhaustive"] = True
        else:
            sample = sample_goodness(g, w, gamma, params.r, params.M, trials, Seed(seed).child(2), k=params.K)
            result.update(
                fraction=sample.fraction,
                stderr=sample.stderr,
                trials=sample.trials,
                copies=sample.copies,
                y_count=sample.y_total,
                z_count=sample.z_total,
            )
        _echo_json(result)


def _sweep_config(
    config: Optional[Path],
    kind: Optional[str],
    n: Optional[List[int]],
    p: Optional[List[float]],
    beta: Optional[float],
    theta: Optional[List[float]],
    dist: Optional[str],
    pattern: Optional[str],
    eps: Optional[float],
    trials: Optional[int],
    colourings: Optional[int],
    k: Optional[int],
    m: Optional[int],
    order: Optional[str],
    budget: Optional[int],
    seed: Optional[int],
    out: Optional[Path],
    fmt: Optional[str],
) -> ExperimentConfig:
    """Build a config from --config with command-line flags layered on top."""
    data = {}
    if config:
        data = ExperimentConfig.from_json(config).to_dict()
    if p and beta is not None:
        raise InvalidInputError("--p and --beta are mutually exclusive")
    if p:
        data.update(p_grid=p, beta=None)
    if beta is not None:
        data.update(beta=beta, p_grid=None)
    flags = {
        "kind": kind, "n_grid": n or None, "theta_grid": theta or None, "dist": dist,
        "pattern": pattern, "eps": eps, "trials": trials, "colourings": colourings,
        "K": k, "M": m, "order": order, "exact_budget": budget, "master_seed": seed,
        "output": str(out) if out else None, "format": fmt,
    }
    data.update({key: value for key, value in flags.items() if value is not None})
    if "kind" not in data:
        raise InvalidInputError("--kind is required without --config")
    if "n_grid" not in data:
        raise InvalidInputError("at least one --n is required without --config")

    defaults = load_user_defaults().get(data["kind"], {})
    for key in ("trials", "colourings"):
        if data.get(key) is None and key in defaults:
            data[key] = defaults[key]
    return ExperimentConfig.from_dict(data)


@app.command()
def sweep(
    config: Optional[Path] = typer.Option(None, "--config", help="JSON experiment config"),
    kind: Optional[str] = typer.Option(None, "--kind", help="t1a, t1b, t2 or concentration"),
    n: Optional[List[int]] = typer.Option(None, "--n", help="Grid value of n (repeatable)"),
    p: Optional[List[float]] = typer.Option(None, "--p", help="Grid value of p (repeatable)"),
    beta: Optional[float] = typer.Option(None, "--beta", help="p = n^(-beta) for every n"),
    theta: Optional[List[float]] = typer.Option(None, "--theta", help="t2 grid value of theta (repeatable)"),
    dist: Optional[str] = typer.Option(None, "--dist", help="Weight law, e.g. 'constant:1' or 'pareto:6'"),
    pattern: Optional[str] = typer.Option(None, "--pattern", help="t2 pattern: built-in name or edge list file"),
    eps: Optional[float] = typer.Option(None, "--eps", help="Slack in (0, 1/2)"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Seeds per grid cell"),
    colourings: Optional[int] = typer.Option(None, "--colourings", help="t2 colourings per graph"),
    k: Optional[int] = typer.Option(None, "--K", help="t2 weight cut-off"),
    m: Optional[int] = typer.Option(None, "--M", help="t2 colour spread"),
    order: Optional[str] = typer.Option(None, "--order", help="t1a greedy order: id or random"),
    budget: Optional[int] = typer.Option(None, "--budget", help="t1a exact search node budget"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file (default: stdout)"),
    fmt: Optional[str] = typer.Option(None, "--format", help="csv, jsonl or json (one array)"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker threads (default: WCOLOUR_WORKERS or CPU count)"),
    timings: bool = typer.Option(False, "--timings", help="Add a wall_clock column"),
    show_config: bool = typer.Option(False, "--show-config", help="Print the resolved config as JSON and exit"),
):
    """
    Run a Monte Carlo sweep and emit one record per trial.

    Examples:
        wcolour sweep --kind t1a --n 200 --n 400 --beta 0.3 --dist pareto:6 --out t1a.csv
        wcolour sweep --kind t2 --n 300 --beta 0.7 --theta 0.3 --theta 0.8 --K 1 --M 6
        wcolour sweep --config t2.json --workers 4
    """
    with _errors(workers):
        cfg = _sweep_config(
            config, kind, n, p, beta, theta, dist, pattern, eps, trials, colourings,
            k, m, order, budget, seed, out, fmt,
        )
        if show_config:
            typer.echo(cfg.to_json())
            return
        pool = resolve_workers(workers)
        path = Path(cfg.output) if cfg.output else None

        if not err_console.is_terminal:
            emit(run(cfg, pool), cfg.format, path, cfg.kind, include_timing=timings)
            return

        tracker = StepTracker(f"Sweep {cfg.kind} ({cfg.trials} trials per cell, {pool} workers)")
        finished = set()

        def cell_done(cell) -> None:
            finished.add(cell.index)
            tracker.complete(f"cell-{cell.index}", "done")

        grid = cells(cfg)
        records = run(cfg, pool, on_cell_done=cell_done)
        for cell in grid:
            label = f"n={cell.n}" + (f" theta={cell.theta:g}" if cell.theta is not None else f" p={cell.p:.4g}")
            tracker.add(f"cell-{cell.index}", label)

        with Live(tracker.render(), console=err_console, refresh_per_second=8, transient=True) as live:
            tracker.attach_refresh(lambda: live.update(tracker.render()))
            try:
                written = emit(records, cfg.format, path, cfg.kind, include_timing=timings)
            except Exception:
                for cell in grid:
                    if cell.index not in finished:
                        tracker.error(f"cell-{cell.index}", "stopped")
                err_console.print(tracker.render())
                raise
        err_console.print(tracker.render())
        err_console.print(f"\n[bold green]{written} records written[/bold green]" + (f" to {path}" if path else ""))


@app.command()
def version():
    """Display version and system information."""

    show_banner()

    cli_version = "unknown"
    try:
        cli_version = importlib.metadata.version("wcolour")
    except Exception:
        # Fallback: try reading from pyproject.toml if running from source
        try:
            import tomllib
            pyproject_path = Path(__file__).parent.parent.parent / "pyproject.toml"
            if pyproject_path.exists():
                with open(pyproject_path, "rb") as f:
                    data = tomllib.load(f)
                    cli_version = data.get("project", {}).get("version", "unknown")
        except Exception:
            pass

    info_table = Table(show_header=False, box=None, padding=(0, 2))
    info_table.add_column("Key", style="cyan", justify="right")
    info_table.add_column("Value", style="white")

    info_table.add_row("CLI Version", cli_version)
    with _errors():
        workers = resolve_workers(None)
    info_table.add_row("Workers", str(workers))
    info_table.add_row("", "")
    info_table.add_row("Python", platform.python_version())
    info_table.add_row("Platform", platform.system())
    info_table.add_row("Architecture", platform.machine())
    info_table.add_row("OS Version", platform.version())

    panel = Panel(
        info_table,
        title="[bold cyan]wcolour Information[/bold cyan]",
        border_style="cyan",
        padding=(1, 2)
    )

    console.print(panel)
    console.print()
