"""
Main entry point for the anick CLI.
"""

import logging
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from anick import __version__
from anick.bar_oracle import bar_cohomology, finite_basis
from anick.chains import enumerate_chains
from anick.cli import AnickGroup, RunConfig, configure_logging, progress_bar
from anick.errors import CheckFailed, InputError, NotAGSB
from anick.export import export_resolution, load_bimodule, load_presentation, presentation_from_dict, read_json
from anick.formatters import escape, format_element, format_poly, format_word, style_verdict
from anick.freealg import Presentation, verify_gsb
from anick.hochschild import FiniteBimodule, PEIRCE_TYPES, cohomology_dims, trivial_bimodule
from anick.morse import MorseEngine, validate_matching
from anick.resolution import build_resolution, composition_residue_count

logger = logging.getLogger(__name__)

# Tables and panels go to stdout with the results
console = Console()

PRESENTATION = click.Path(exists=True, dir_okay=False)


def _required(value: Optional[int], flag: str) -> int:
    if value is None:
        raise InputError(f"Missing {flag} (give the flag or set it in --config)")
    return value


def _bimodule(config: RunConfig, pres: Presentation) -> FiniteBimodule:
    if config.bimodule is None:
        logger.info("No --bimodule given, using the trivial bimodule of dimension 1")
        return trivial_bimodule(pres, 1)
    return load_bimodule(config.bimodule, pres)


@click.group(cls=AnickGroup)
@click.version_option(version=__version__, prog_name="anick")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="YAML file with run settings; flags override it.")
@click.option("--quiet", is_flag=True, default=None, help="Only warnings on stderr, no progress bars.")
@click.option("--verbose", is_flag=True, default=None, help="Debug logging on stderr.")
@click.option("--workers", type=int, default=None, help="Threads for per-chain work (default 1).")
@click.option("--no-memo", "no_memo", is_flag=True, default=False,
              help="Disable the shared path-tracking memo.")
@click.option("--oracle-cap", type=int, default=None,
              help="Largest bar complex (rows) the oracle may build (default 1000000).")
@click.pass_context
def main(ctx, config_path, quiet, verbose, workers, no_memo, oracle_cap):
    """
    anick - Anick resolutions and Hochschild cohomology

    Builds Anick resolutions of algebras given by a Gröbner–Shirshov basis,
    computes Hochschild cohomology with exact arithmetic and checks the
    results against the bar complex.
    """
    config = RunConfig.from_sources(
        config_path,
        quiet=quiet or None,
        verbose=verbose or None,
        workers=workers,
        memo=False if no_memo else None,
        oracle_cap=oracle_cap,
    )
    configure_logging(config)
    ctx.obj = config


@main.command()
@click.option("--degree", type=int, default=None, help="Chain degree n (V^(n)).")
@click.argument("presentation", type=PRESENTATION)
@click.pass_obj
def chains(config: RunConfig, degree, presentation):
    """List the Anick chains of one degree."""
    config.update(subcommand="chains", degree=degree, presentation=presentation)
    pres = load_presentation(presentation)
    pres.require_gsb()
    for chain in enumerate_chains(pres, _required(config.degree, "--degree")):
        click.echo(str(chain))


@main.command()
@click.option("--degree", type=int, default=None, help="Differential δ_n to print (n >= 1).")
@click.option("--dot", type=click.Path(dir_okay=False), default=None,
              help="Write the explored bar-graph fragment as Graphviz DOT.")
@click.argument("presentation", type=PRESENTATION)
@click.pass_obj
def diff(config: RunConfig, degree, dot, presentation):
    """Print δ_n on every chain of V^(n-1)."""
    config.update(subcommand="diff", degree=degree, dot=dot, presentation=presentation)
    n = _required(config.degree, "--degree")
    if n < 1:
        raise InputError(f"--degree must be >= 1 for diff, got {n}")
    pres = load_presentation(presentation)
    pres.require_gsb()
    engine = MorseEngine(pres, memo=config.memo, record_graph=config.dot is not None)
    for chain in enumerate_chains(pres, n - 1):
        click.echo(f"δ{n}{chain} = {format_element(engine.differential(chain))}")
    if config.dot:
        Path(config.dot).write_text(engine.to_dot(), encoding="utf-8")
        logger.info("Bar-graph fragment with %d edges written to %s", len(engine.edges), config.dot)


@main.command("check-resolution")
@click.option("--max-degree", type=int, default=None, help="Build δ_1..δ_N.")
@click.option("--export", type=click.Path(dir_okay=False), default=None,
              help="Write the slices as anick-resolution/1 JSON.")
@click.argument("presentation", type=PRESENTATION)
@click.pass_obj
def check_resolution(config: RunConfig, max_degree, export, presentation):
    """Build the resolution and verify δδ = 0 and the matching."""
    config.update(subcommand="check-resolution", max_degree=max_degree, export=export,
                  presentation=presentation)
    n = _required(config.max_degree, "--max-degree")
    pres = load_presentation(presentation)
    with progress_bar(config) as progress:
        res = build_resolution(pres, n, progress=progress, **config.build_options)
    matching = validate_matching(pres, n - 1)
    for current, report in zip(res, res.reports):
        click.echo(f"δ{current.degree}: {len(current.basis)} chains, "
                   f"{len(report.residues)} zero residues")
    click.echo(f"matching: {matching.vertices} vertices, {matching.critical} critical, "
               f"{matching.pairs} pairs, acyclic")
    click.echo(f"δδ = 0 verified on {composition_residue_count(res)} chains")
    if config.export:
        export_resolution(res, config.export)


@main.command()
@click.option("--bimodule", type=PRESENTATION, default=None,
              help="Bimodule JSON (default: trivial bimodule of dimension 1).")
@click.option("--max-degree", type=int, default=None, help="Compute H^0..H^N.")
@click.argument("presentation", type=PRESENTATION)
@click.pass_obj
def cohomology(config: RunConfig, bimodule, max_degree, presentation):
    """Hochschild cohomology dimensions from the Anick resolution."""
    config.update(subcommand="cohomology", bimodule=bimodule, max_degree=max_degree,
                  presentation=presentation)
    n = _required(config.max_degree, "--max-degree")
    pres = load_presentation(presentation)
    M = _bimodule(config, pres)
    with progress_bar(config) as progress:
        result = cohomology_dims(pres, M, n, progress=progress, **config.build_options)
    for degree, dim in enumerate(result.dims):
        click.echo(f"H^{degree} = {dim}")


@main.command("oracle-compare")
@click.option("--bimodule", type=PRESENTATION, default=None,
              help="Bimodule JSON (default: trivial bimodule of dimension 1).")
@click.option("--max-degree", type=int, default=None, help="Compare H^0..H^N.")
@click.argument("presentation", type=PRESENTATION)
@click.pass_obj
def oracle_compare(config: RunConfig, bimodule, max_degree, presentation):
    """Compare Anick cohomology with the brute-force bar complex."""
    config.update(subcommand="oracle-compare", bimodule=bimodule, max_degree=max_degree,
                  presentation=presentation)
    n = _required(config.max_degree, "--max-degree")
    pres = load_presentation(presentation)
    M = _bimodule(config, pres)
    algebra = finite_basis(pres)
    with progress_bar(config) as progress:
        anick_dims = cohomology_dims(pres, M, n, progress=progress, **config.build_options).dims
    bar_dims = bar_cohomology(algebra, M, n, cap=config.oracle_cap)

    table = Table(title=f"H^n({pres.name or 'A'}, {M.name or 'M'})")
    table.add_column("n", justify="right")
    table.add_column("Anick", justify="right")
    table.add_column("bar", justify="right")
    table.add_column("", justify="center")
    mismatched = []
    for degree, (a, b) in enumerate(zip(anick_dims, bar_dims)):
        if a != b:
            mismatched.append(degree)
        table.add_row(str(degree), str(a), str(b), style_verdict(a == b, "=", "≠"))
    console.print(table)
    if mismatched:
        raise CheckFailed(f"Anick and bar cohomology differ in degrees {mismatched}")


@main.command("weyl-demo")
@click.pass_obj
def weyl_demo_command(config: RunConfig):
    """Chains, differential tables and the H^3 coboundary certificates for W1."""
    from anick.weyl_showcase import chain_label, weyl_demo

    config.update(subcommand="weyl-demo")
    with progress_bar(config) as progress:
        report = weyl_demo(progress=progress, **config.build_options)

    counts = ", ".join(f"|V^({k})| = {c}" for k, c in enumerate(report.chain_counts))
    click.echo(f"chains: {counts}")
    entries = report.differentials.entries
    for degree in (3, 4):
        rows = [e for e in entries if e.degree == degree]
        matched = sum(1 for e in rows if e.verdict == "MATCH")
        click.echo(f"δ{degree}: {matched}/{len(rows)} entries match the reference table")
    for entry in report.differentials.discrepancies:
        click.echo(f"  {entry.verdict} δ{entry.degree}[{chain_label(entry.chain)}]: "
                   f"computed {format_element(entry.computed, compact=True)}")
    for ptype in PEIRCE_TYPES:
        system = report.systems[ptype]
        free = ", ".join(f"φ[{name}]" for name in system.free)
        zero = ", ".join(f"φ[{name}]" for name in system.derived_identities)
        click.echo(f"type {ptype}: free {{{free}}}" + (f"; zero {{{zero}}}" if zero else ""))
        for constraint in system.constraints:
            click.echo(f"  constraint: {constraint!r} = 0")
        certificate = report.certificates[ptype]
        verdict = "OK" if certificate.passed else "FAILED"
        click.echo(f"  ψδ3 = φ on {len(certificate.residues)} chains: {verdict}")
    click.echo(f"{report.certified}/{len(PEIRCE_TYPES)} coboundary certificates OK")
    if report.certified < len(PEIRCE_TYPES):
        raise CheckFailed("H^3(W1, M) coboundary certificate failed")


@main.command()
@click.pass_obj
def heisenberg(config: RunConfig):
    """δ3[x|y|z] of U(H3) and the Chevalley–Eilenberg comparison."""
    from anick.weyl_showcase import heisenberg_fixture

    config.update(subcommand="heisenberg")
    report = heisenberg_fixture(**config.build_options)
    click.echo(f"chains: {report.chain_counts}")
    click.echo(f"δ3[x|y|z] = {format_element(report.delta3, compact=True)}")
    agreeing = sum(1 for ok in report.ce_agreement.values() if ok)
    click.echo(f"Chevalley–Eilenberg agreement: {agreeing}/{len(report.ce_agreement)} chains")
    if not report.passed:
        raise CheckFailed("U(H3) resolution disagrees with the Chevalley–Eilenberg differential")


@main.command("conformal-check")
@click.option("--rank", type=int, default=None, help="Matrix size k of Cend_k (default 1).")
@click.option("--window", type=int, default=None, help="Total degree of the monomial window (default 6).")
@click.pass_obj
def conformal_check(config: RunConfig, rank, window):
    """Coefficient algebra of Cend_k against M_k(W1)."""
    from anick.conformal import associativity_check, bimodule_check, weyl_iso_check, weyl_relation_holds

    config.update(subcommand="conformal-check", rank=rank, window=window)
    if not weyl_relation_holds():
        raise CheckFailed("t·x = x·t + 1 does not hold in the coefficient algebra")
    click.echo("t·x = x·t + 1: OK")
    certificate = weyl_iso_check(config.window, config.rank)
    click.echo(f"A+(Cend_{certificate.rank}) ≅ M_{certificate.rank}(W1): "
               f"{certificate.pairs_checked} products agree (window {certificate.window})")
    click.echo(f"associativity: {associativity_check(5)} triples")
    click.echo(f"bimodule compatibility: {bimodule_check()} cases")


@main.command()
@click.argument("presentation", type=PRESENTATION)
@click.pass_obj
def verify(config: RunConfig, presentation):
    """Diamond Lemma report for a presentation."""
    config.update(subcommand="verify", presentation=presentation)
    pres = load_presentation(presentation)
    report = verify_gsb(pres, raise_on_failure=False)
    for amb in report.ambiguities:
        status = "resolved" if amb.resolved else f"{format_poly(amb.nf1)} ≠ {format_poly(amb.nf2)}"
        click.echo(f"{amb.kind} {format_word(amb.word)}: {status}")
    click.echo(f"{len(report.ambiguities)} ambiguities, {len(report.failures)} unresolved")
    if report.failures:
        first = report.failures[0]
        raise NotAGSB(format_word(first.word), format_poly(first.nf1), format_poly(first.nf2))


@main.command()
@click.option("--max-degree", type=int, default=None, help="Resolution depth per fixture (default 3).")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.pass_obj
def corpus(config: RunConfig, max_degree, directory):
    """Run every presentation fixture in DIRECTORY.

    A fixture marked "expect": "not-gsb" passes when its Diamond Lemma check
    fails.
    """
    config.update(subcommand="corpus", max_degree=max_degree)
    depth = config.max_degree if config.max_degree is not None else 3
    table = Table(title=f"Corpus {directory}")
    table.add_column("fixture")
    table.add_column("GSB", justify="center")
    table.add_column("δδ = 0", justify="right")
    table.add_column("", justify="center")
    failed = []
    for path in sorted(Path(directory).glob("*.json")):
        data = read_json(path)
        if not isinstance(data, dict) or "generators" not in data:
            continue
        pres = presentation_from_dict(data, name=path.stem)
        gsb = verify_gsb(pres, raise_on_failure=False).passed
        expect_gsb = data.get("expect") != "not-gsb"
        checked = "-"
        if gsb:
            res = build_resolution(pres, depth, **config.build_options)
            checked = str(composition_residue_count(res))
        ok = gsb == expect_gsb
        if not ok:
            failed.append(path.name)
        table.add_row(escape(path.name), "yes" if gsb else "no", checked, style_verdict(ok))
    console.print(table)
    if failed:
        raise CheckFailed(f"Corpus fixtures failed: {failed}")
    console.print(Panel(f"✅ {len(table.rows)} fixtures OK", expand=False))


if __name__ == "__main__":
    main()
