"""
Command line interface for chernaudit
"""

import json
import logging
from typing import Optional, Tuple

import click

from . import kummer, localforms
from .checks import DEFAULT_SAMPLE_RANGE, registered_checks
from .config import apply_config, dump_config as write_config, load_config
from .exceptions import ChernAuditError
from .rendering import render_listing, report_to_json, report_to_text
from .runner import NoMatchingChecks, VerificationRunner
from .varieties import builtin_presentations


def setup_logging(verbose: bool = False) -> None:
    """Configure logging based on verbosity level"""
    level = logging.DEBUG if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )


def parse_sample_range(ctx, param, value: Optional[str]) -> Tuple[int, int]:
    if value is None:
        return DEFAULT_SAMPLE_RANGE
    try:
        lo, hi = (int(part) for part in value.split(":"))
    except ValueError:
        raise click.BadParameter("expected LO:HI with integers, e.g. -6:6") from None
    if lo > hi:
        raise click.BadParameter(f"empty range {lo}:{hi}")
    return lo, hi


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text + "\n")
        click.echo(f"Results saved to {output}", err=True)
    else:
        click.echo(text)


def _dump_matrices() -> str:
    matrices = localforms.root_cover_matrices()
    blocks = []
    for name in ("u_f", "v_f", "du_f", "dv_f"):
        blocks.append(f"== {name} ==")
        blocks.append(localforms.render_matrix(matrices[name]))
    return "\n".join(blocks)


def _dump_incidence(fmt: str) -> str:
    matrix = kummer.incidence_matrix()
    if fmt == 'json':
        return json.dumps(matrix)
    return kummer.render_incidence(matrix)


@click.command()
@click.argument('pattern', default='*')
@click.option(
    '--format',
    'fmt',
    type=click.Choice(['text', 'json']),
    default='text',
    help='Report format'
)
@click.option(
    '--config',
    'config_path',
    help='Config file with extra or replacement presentations',
    type=click.Path(exists=True, dir_okay=False)
)
@click.option(
    '--dump-matrices',
    is_flag=True,
    help='Print u, v, du, dv on the root cover in the new frame and exit'
)
@click.option(
    '--dump-config',
    help='Write the presentations in config format to FILE and exit',
    type=click.Path(dir_okay=False)
)
@click.option(
    '--dump-incidence',
    is_flag=True,
    help='Print the 16x16 node/trope incidence matrix and exit'
)
@click.option(
    '--sample-range',
    callback=parse_sample_range,
    help='Integer window LO:HI scanned by sampling checks (default -6:6)'
)
@click.option(
    '--max-workers',
    default=4,
    help='Number of checks run in parallel',
    type=int
)
@click.option(
    '--output',
    '-o',
    help='Output file path (default: print to stdout)',
    type=click.Path()
)
@click.option(
    '--list',
    'list_only',
    is_flag=True,
    help='List registered checks with citations and exit'
)
@click.option(
    '--verbose',
    '-v',
    is_flag=True,
    help='Enable verbose logging'
)
@click.pass_context
def main(
    ctx: click.Context,
    pattern: str,
    fmt: str,
    config_path: Optional[str],
    dump_matrices: bool,
    dump_config: Optional[str],
    dump_incidence: bool,
    sample_range: Tuple[int, int],
    max_workers: int,
    output: Optional[str],
    list_only: bool,
    verbose: bool
) -> None:
    """Re-derive the closed-form computations and report pass/fail per check

    Exit status is 0 when every selected check passes, 1 when any fails and
    2 on usage or config errors.

    Examples:
        verify
        verify 'deg1.*' --format json
        verify --config perturbed.cfg -o report.txt
    """
    setup_logging(verbose)

    if dump_matrices:
        _emit(_dump_matrices(), output)
        return
    if dump_incidence:
        _emit(_dump_incidence(fmt), output)
        return

    presentations = builtin_presentations()
    configured = ()
    if config_path:
        try:
            loaded = load_config(config_path, base=presentations)
            presentations = apply_config(presentations, loaded)
        except ChernAuditError as exc:
            click.echo(f"Error: {config_path}: {exc}", err=True)
            ctx.exit(2)
        configured = tuple(loaded.curves)

    if dump_config:
        write_config(presentations, dump_config)
        click.echo(f"Config written to {dump_config}", err=True)
        return

    runner = VerificationRunner(presentations, sample_range, configured, max_workers)

    if list_only:
        entries = [(check.id, check.citation) for check in registered_checks(runner.context)]
        _emit(render_listing(entries), output)
        return

    try:
        report = runner.run(pattern)
    except NoMatchingChecks as exc:
        raise click.UsageError(str(exc))
    except KeyboardInterrupt:
        click.echo("\nVerification interrupted by user", err=True)
        ctx.exit(1)

    text = report_to_json(report) if fmt == 'json' else report_to_text(report)
    _emit(text, output)
    ctx.exit(0 if report.ok else 1)


if __name__ == '__main__':
    main()
