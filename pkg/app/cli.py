"""
Command-line front end.

Every command reads a lattice as JSON ({"gram": [[...]]}) from a file or
stdin ("-"), or from a standard expression given with --lattice, and prints
JSON on stdout. Commands that take a finite quadratic module also accept
Fqm JSON ({"divisors": [...], "q_mod1": [...], "gram_mod1": [[...]]}).

Exit codes: 0 success, 2 the reported verdict failed, 64 unreadable input,
65 degenerate lattice, 1 any other error.
"""

import csv
import json
import sys
from functools import wraps
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from app.calculation.fqm import Fqm
from app.calculation.lattice_core import GramMatrix, discriminant_group
from app.logger import logger
from app.schemas.common_schema import ComplexInput, FqmSchema, LatticeInput
from app.schemas.gate_schema import PrincipalPartSchema
from app.services.lattice_analysis_service import LatticeAnalysisService
from app.services.lfactor_service import LFactorService
from app.services.scan_service import ScanService
from app.utils.errors import (
    DegenerateLatticeError,
    InvalidLatticeError,
    InvalidModuleError,
    LatticeGateError,
    PrincipalPartError,
)
from app.utils.settings import Settings, settings

EXIT_VERDICT_FAILED = 2
EXIT_PARSE_ERROR = 64
EXIT_DEGENERATE = 65

app = typer.Typer(help="Finite quadratic modules, Weil representations and Borcherds-lift gates.")

LatticeOption = typer.Option(None, "--lattice", help='Standard lattice expression, e.g. "A2+A2+U+U".')
InputArgument = typer.Argument(None, help="JSON input file, '-' for stdin.")
BoundOption = typer.Option(None, "--bound", help="Search bound for isotropic vectors and box enumeration.")
PrecisionOption = typer.Option(None, "--precision-bits", help="Interval precision in bits.")


class InputError(Exception):
    pass


def _settings(bound: Optional[int] = None, precision_bits: Optional[int] = None, **extra) -> Settings:
    update = {k: v for k, v in extra.items() if v is not None}
    if bound is not None:
        update["search_bound"] = bound
    if precision_bits is not None:
        update["precision_bits"] = precision_bits
    if not update:
        return settings
    try:
        return Settings(**{**settings.model_dump(), **update})
    except ValidationError as exc:
        raise InputError(str(exc)) from exc


def _read_json(path: Optional[Path]):
    if path is None:
        raise InputError("give an input file or --lattice")
    try:
        text = sys.stdin.read() if str(path) == "-" else path.read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_lattice(path: Optional[Path], expression: Optional[str]) -> GramMatrix:
    try:
        if expression is not None:
            return LatticeInput(expression=expression).to_domain()
        return LatticeInput.model_validate(_read_json(path)).to_domain()
    except ValidationError as exc:
        raise InputError(str(exc)) from exc


def _load_module(path: Optional[Path], expression: Optional[str]) -> tuple[Fqm, Optional[GramMatrix]]:
    if expression is None:
        data = _read_json(path)
        if isinstance(data, dict) and "divisors" in data:
            try:
                return FqmSchema.model_validate(data).to_domain(), None
            except ValidationError as exc:
                raise InputError(str(exc)) from exc
    g = _load_lattice(path, expression)
    return discriminant_group(g), g


def _emit(model) -> None:
    typer.echo(model.model_dump_json(indent=2))


def handle_errors(command):
    """Map domain errors to the documented exit codes."""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except typer.Exit:
            raise
        except (InputError, InvalidLatticeError, InvalidModuleError, PrincipalPartError) as exc:
            logger.error("invalid input: %s", exc)
            raise typer.Exit(EXIT_PARSE_ERROR)
        except DegenerateLatticeError as exc:
            logger.error("degenerate lattice: %s", exc)
            raise typer.Exit(EXIT_DEGENERATE)
        except (LatticeGateError, ValueError) as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            raise typer.Exit(1)

    return wrapper


@app.command()
@handle_errors
def analyze(
    input_path: Optional[Path] = InputArgument,
    lattice: Optional[str] = LatticeOption,
    bound: Optional[int] = BoundOption,
    precision_bits: Optional[int] = PrecisionOption,
):
    """Profile, discriminant form, anisotropy, classification, Weil relations and converse gate."""
    g = _load_lattice(input_path, lattice)
    _emit(LatticeAnalysisService(_settings(bound, precision_bits)).analyze(g))


@app.command()
@handle_errors
def weil(
    input_path: Optional[Path] = InputArgument,
    lattice: Optional[str] = LatticeOption,
    sig: Optional[int] = typer.Option(None, "--sig", help="Signature mod 8, defaults to the Milgram signature."),
    gamma: Optional[str] = typer.Option(None, "--gamma", help="a,b,c,d of a matrix in SL2(Z)."),
    precision_bits: Optional[int] = PrecisionOption,
):
    """Exact Weil matrices rho(T), rho(S), rho(Z) and the relation report."""
    a, g = _load_module(input_path, lattice)
    if sig is None and g is not None:
        sig = (g.signature_pair[0] - g.signature_pair[1]) % 8
    matrix = None
    if gamma is not None:
        try:
            a_, b_, c_, d_ = (int(x) for x in gamma.split(","))
        except ValueError as exc:
            raise InputError("--gamma needs four integers a,b,c,d") from exc
        matrix = [[a_, b_], [c_, d_]]
    response = LatticeAnalysisService(_settings(precision_bits=precision_bits)).weil(a, sig, matrix)
    _emit(response)
    if not all(response.relations.values()):
        raise typer.Exit(EXIT_VERDICT_FAILED)


@app.command()
@handle_errors
def gauss(
    input_path: Optional[Path] = InputArgument,
    lattice: Optional[str] = LatticeOption,
    d: int = typer.Option(1, "--d", help="Gauss sum g_d(A)."),
    precision_bits: Optional[int] = PrecisionOption,
):
    """Gauss sum and Milgram signature."""
    a, _ = _load_module(input_path, lattice)
    _emit(LatticeAnalysisService(_settings(precision_bits=precision_bits)).gauss(a, d))


@app.command()
@handle_errors
def theta(
    input_path: Optional[Path] = InputArgument,
    lattice: Optional[str] = LatticeOption,
    n_max: str = typer.Option("2", "--n-max", help="Largest exponent, a rational."),
    output_format: str = typer.Option("json", "--format", help="json or csv."),
    tau: Optional[list[str]] = typer.Option(None, "--tau", help="re,im sample points for the modularity check."),
    precision_bits: Optional[int] = PrecisionOption,
):
    """Theta coefficients per coset; with --tau also the certified modularity residual."""
    if output_format not in ("json", "csv"):
        raise InputError("--format must be json or csv")
    g = _load_lattice(input_path, lattice)
    samples = None
    if tau:
        try:
            samples = [tuple(float(x) for x in t.split(",")) for t in tau]
        except ValueError as exc:
            raise InputError("--tau needs re,im") from exc
    response = LatticeAnalysisService(_settings(precision_bits=precision_bits)).theta(g, n_max, tau_samples=samples)
    if output_format == "json":
        _emit(response)
        return
    fields = ["coset", "n_plus", "n_minus", "count"] if response.indefinite else ["coset", "n", "count"]
    writer = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in response.rows:
        record = row.model_dump(include=set(fields))
        record["coset"] = " ".join(map(str, row.coset))
        writer.writerow(record)


@app.command("check-converse")
@handle_errors
def check_converse(
    input_path: Optional[Path] = InputArgument,
    lattice: Optional[str] = LatticeOption,
):
    """Hypotheses of the converse theorem; exit 2 when any fails."""
    g = _load_lattice(input_path, lattice)
    report = LatticeAnalysisService(_settings()).converse(g)
    _emit(report)
    if not report.passed:
        raise typer.Exit(EXIT_VERDICT_FAILED)


@app.command()
@handle_errors
def reflective(
    input_path: Optional[Path] = InputArgument,
    lattice: Optional[str] = LatticeOption,
    principal_part: Path = typer.Option(..., "--principal-part", help="PrincipalPart JSON file."),
    relaxed_integrality: bool = typer.Option(False, "--relaxed-integrality", help="Accept positive rationals."),
    symmetrize: bool = typer.Option(False, "--symmetrize", help="Also check the O(A)-symmetrization."),
):
    """Reflectivity criterion for a principal part; exit 2 when it fails."""
    a, _ = _load_module(input_path, lattice)
    try:
        pp = PrincipalPartSchema.model_validate(_read_json(principal_part)).to_domain()
    except ValidationError as exc:
        raise InputError(str(exc)) from exc
    service = LatticeAnalysisService(_settings(relaxed_integrality=relaxed_integrality or None))
    response = service.reflective(a, pp, with_symmetrization=symmetrize)
    _emit(response)
    if not response.passed:
        raise typer.Exit(EXIT_VERDICT_FAILED)


def _complex_option(value: Optional[str]):
    if value is None:
        return None
    return ComplexInput(re=value).to_value()


@app.command()
@handle_errors
def lfactor(
    input_path: Optional[Path] = InputArgument,
    lattice: Optional[str] = LatticeOption,
    m: int = typer.Option(..., "--m", help="Rank of the lattice, even."),
    l: int = typer.Option(0, "--l"),
    primes: str = typer.Option("2,3,5,7", "--primes", help="Comma separated primes."),
    chi_a: str = typer.Option("jacobi", "--chi-a", help="jacobi, trivial or table:v0,v1,..."),
    L_value: Optional[str] = typer.Option(None, "--L-value", help="L(s0, f), needed for the L2-norm."),
    vol: Optional[str] = typer.Option(None, "--vol"),
    c_s0: Optional[str] = typer.Option(None, "--c-s0"),
    precision_bits: Optional[int] = PrecisionOption,
):
    """Non-vanishing terms per prime; with --L-value, --vol and --c-s0 also the L2-norm assembly."""
    a, _ = _load_module(input_path, lattice)
    try:
        prime_list = [int(p) for p in primes.split(",")]
    except ValueError as exc:
        raise InputError("--primes needs comma separated integers") from exc
    service = LFactorService(_settings(precision_bits=precision_bits))
    report = service.nonvanishing(a, m, l, prime_list)
    output = {"nonvanishing": report.model_dump(mode="json")}
    if any(v is not None for v in (L_value, vol, c_s0)):
        assembly = service.l2_norm(
            a, m, l,
            L_value=_complex_option(L_value),
            vol=_complex_option(vol),
            c_s0=_complex_option(c_s0),
            chi_spec=chi_a,
        )
        output["l2_norm"] = assembly.model_dump(mode="json")
    typer.echo(json.dumps(output, indent=2))
    if not report.all_nonzero:
        raise typer.Exit(EXIT_VERDICT_FAILED)


@app.command()
@handle_errors
def scan(
    max_order: int = typer.Option(..., "--max-order"),
    signatures: str = typer.Option("1,2,3,4,5,6,7,8", "--signatures", help="Comma separated signatures p - 2."),
    table: bool = typer.Option(False, "--table", help="Print a table instead of JSON."),
):
    """Anisotropic modules of odd square-free order with singular weight data."""
    try:
        signature_list = [int(s) for s in signatures.split(",")]
    except ValueError as exc:
        raise InputError("--signatures needs comma separated integers") from exc
    rows = ScanService(_settings()).scan(max_order, signature_list)
    if not table:
        typer.echo(json.dumps([row.model_dump(mode="json") for row in rows], indent=2))
        return
    grid = Table(title=f"anisotropic modules up to order {max_order}")
    for column in ("order", "components", "sig", "p", "weight", "c(0,0)", "|A_c,1/c|"):
        grid.add_column(column)
    for row in rows:
        grid.add_row(
            str(row.order),
            " + ".join(row.components) or "0",
            str(row.signature),
            str(row.p),
            row.weight,
            str(row.c00),
            ", ".join(f"{c}: {n}" for c, n in row.index_set_sizes.items()),
        )
    Console().print(grid)


if __name__ == "__main__":
    app()
