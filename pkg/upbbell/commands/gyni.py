"""The gyni command."""

import click

from ..models.reports import CommandResult
from ..services.formats import format_bell, format_pvs
from ..services.gyni import congruence_reduce, gyni_inequality, gyni_vectors, tightness_certificate
from .common import reported, success
from .sets import inequality_report


@click.command()
@click.argument("n", type=int)
@click.option("--vectors", "mode", flag_value="vectors", help="Print the GYNI UPB as .pvs")
@click.option("--bell", "mode", flag_value="bell", default=True, help="Print the inequality (default)")
@click.option("--certify", "mode", flag_value="certify", help="Certify tightness through the strategy calculus")
@click.option("--strategy", default=None, help="With --certify, print the certificate of one strategy string")
@click.option("--cross-check/--no-cross-check", default=None, help="Also run the rank route")
@reported
def gyni(n: int, mode: str, strategy: str | None, cross_check: bool | None) -> CommandResult:
    """Guess-your-neighbour's-input vectors, inequality or tightness certificate for n parties."""
    if mode == "vectors":
        U = gyni_vectors(n)
        return success(format_pvs(U).rstrip("\n"), {"parties": n, "kets": U.kets()})
    if mode == "bell":
        B = gyni_inequality(n)
        report = inequality_report(B)
        return success(f"{B}\n\n{format_bell(B).rstrip()}", report)

    if strategy is not None:
        certificate = congruence_reduce(strategy)
        machine = {
            "target": certificate.target,
            "combination": [[f"{k.numerator}/{k.denominator}", s] for k, s in certificate.combination],
            "residual": f"{certificate.residual.numerator}/{certificate.residual.denominator}",
        }
        return success("\n".join(certificate.lines()), machine)

    report = tightness_certificate(n, cross_check=cross_check)
    text = (
        f"{report.verdict.value}\n"
        f"{report.certificates_verified} certificates verified, {report.saturating_count} saturating "
        f"of {report.strategy_count} strategies; affine dimension {report.affine_dimension} of d = "
        f"{report.polytope_dimension}" + (" (rank route agrees)" if report.cross_checked else "")
    )
    return success(text, report)
