"""Console, banner, progress tree and the Typer app for wcolour."""

import logging
import sys
import threading

import typer
from rich.align import Align
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.text import Text
from rich.tree import Tree
from typer.core import TyperGroup

from .config import BANNER, EXIT_INVALID, TAGLINE

# stdout carries results only; everything for humans goes to stderr
console = Console()
err_console = Console(stderr=True)

# Global flags set by the app callback
cli_state = {"debug": False}


class StepTracker:
    """Track and render sweep steps (one per grid cell) as a tree.
    Cells go pending, then done or error. Supports live auto-refresh via an
    attached refresh callback; safe to update from worker threads.
    """
    def __init__(self, title: str):
        self.title = title
        self.steps = []  # list of dicts: {key, label, status, detail}
        self._refresh_cb = None
        self._lock = threading.Lock()

    def attach_refresh(self, cb):
        self._refresh_cb = cb

    def add(self, key: str, label: str):
        with self._lock:
            if key in [s["key"] for s in self.steps]:
                return
            self.steps.append({"key": key, "label": label, "status": "pending", "detail": ""})
        self._maybe_refresh()

    def complete(self, key: str, detail: str = ""):
        self._update(key, status="done", detail=detail)

    def error(self, key: str, detail: str = ""):
        self._update(key, status="error", detail=detail)

    def _update(self, key: str, status: str, detail: str):
        with self._lock:
            for s in self.steps:
                if s["key"] == key:
                    s["status"] = status
                    if detail:
                        s["detail"] = detail
                    break
            else:
                self.steps.append({"key": key, "label": key, "status": status, "detail": detail})
        self._maybe_refresh()

    def _maybe_refresh(self):
        if self._refresh_cb:
            try:
                self._refresh_cb()
            except Exception:
                pass

    def render(self):
        tree = Tree(f"[cyan]{self.title}[/cyan]", guide_style="grey50")
        with self._lock:
            steps = [dict(s) for s in self.steps]
        for step in steps:
            label = step["label"]
            detail_text = step["detail"].strip() if step["detail"] else ""

            status = step["status"]
            if status == "done":
                symbol = "[green]●[/green]"
            elif status == "pending":
                symbol = "[green dim]○[/green dim]"
            elif status == "error":
                symbol = "[red]●[/red]"
            else:
                symbol = " "

            if status == "pending":
                if detail_text:
                    line = f"{symbol} [bright_black]{label} ({detail_text})[/bright_black]"
                else:
                    line = f"{symbol} [bright_black]{label}[/bright_black]"
            else:
                if detail_text:
                    line = f"{symbol} [white]{label}[/white] [bright_black]({detail_text})[/bright_black]"
                else:
                    line = f"{symbol} [white]{label}[/white]"

            tree.add(line)
        return tree


class BannerGroup(TyperGroup):
    """Custom group that shows banner before help."""

    def format_help(self, ctx, formatter):
        show_banner()
        super().format_help(ctx, formatter)


def show_banner():
    """Display the ASCII art banner on stderr."""
    banner_lines = BANNER.strip().split('\n')
    colors = ["cyan", "cyan", "cyan", "cyan", "cyan", "bright_white"]

    styled_banner = Text()
    for i, line in enumerate(banner_lines):
        color = colors[i % len(colors)]
        styled_banner.append(line + "\n", style=color)

    err_console.print(Align.center(styled_banner))
    err_console.print(Align.center(Text(TAGLINE, style="italic bright_yellow")))
    err_console.print()


def setup_logging(verbose: bool = False, debug: bool = False) -> None:
    """Route library logging through rich on stderr."""
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=debug, rich_tracebacks=debug)],
        force=True,
    )


def show_debug_environment(pairs: list[tuple[str, str]]) -> None:
    label_width = max(len(k) for k, _ in pairs)
    env_lines = [f"{k.ljust(label_width)} → [bright_black]{escape(v)}[/bright_black]" for k, v in pairs]
    err_console.print(Panel("\n".join(env_lines), title="Debug Environment", border_style="magenta"))


def fail(message: str, code: int = EXIT_INVALID):
    """Print a one-line diagnostic on stderr and exit with `code`."""
    err_console.print(f"[red]Error:[/red] {escape(message)}", soft_wrap=True, highlight=False)
    raise typer.Exit(code)


app = typer.Typer(
    name="wcolour",
    help="Weighted colourings of random graphs: generation, colouring, pattern counts and Monte Carlo sweeps",
    add_completion=False,
    invoke_without_command=True,
    cls=BannerGroup,
)


@app.callback()
def callback(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress messages to stderr"),
    debug: bool = typer.Option(False, "--debug", help="Log debug messages and show the environment on failure"),
):
    """Show banner when no subcommand is provided."""
    cli_state["debug"] = debug
    setup_logging(verbose, debug)
    if ctx.invoked_subcommand is None and "--help" not in sys.argv and "-h" not in sys.argv:
        show_banner()
        err_console.print(Align.center("[dim]Run 'wcolour --help' for usage information[/dim]"))
        err_console.print()
