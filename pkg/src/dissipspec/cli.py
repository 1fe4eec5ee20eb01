"""Command-line front end.

Exit codes: 0 ok, 2 invalid input, 3 divergent or inadmissible result,
4 quadrature did not converge.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import click
import numpy as np

from .band import (
    DEFAULT_TOL,
    Band,
    Classification,
    Divergent,
    band_power_finite,
    band_power_infinite,
    classify_infrared,
)
from .errors import ParameterError, QuadratureError
from .fit import fit_spectrum
from .spectra import (
    DissipationParams,
    FiniteSignalModel,
    augmented_r,
    psd_finite,
    psd_infinite,
)
from .synth import estimate_psd, synthesize_grid, uniform_times
from .turbulence import TurbulenceExponent

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DIVERGENT = 3
EXIT_NONCONVERGED = 4


# ---------------------------------------------------------------------------
# formatting


def format_float(value):
    """17 significant digits, lowercase ``inf`` for infinities."""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def _json_value(value):
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return "inf" if math.isinf(value) else value
    if isinstance(value, np.integer):
        return int(value)
    return value


def to_json(payload):
    return json.dumps(_json_value(payload), sort_keys=True)


def _flatten(payload, prefix=""):
    flat = {}
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "_"))
        elif isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                flat[f"{name}_{i}"] = item
        else:
            flat[name] = value
    return flat


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def to_csv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row[key]) for key in header])
    return buf.getvalue()


def report_text(payload, fmt):
    """Render a scalar report as JSON or a one-row CSV."""
    if fmt == "csv":
        flat = _flatten(payload)
        header = sorted(flat)
        return to_csv([flat], header)
    return to_json(payload) + "\n"


def _write(text, out):
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# grids and parameters


def parse_grid(spec, log):
    """Parse ``lo:hi:count`` into a linear or logarithmic frequency grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ParameterError(f"grid spec must be lo:hi:count, got {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ParameterError(f"grid spec must be lo:hi:count, got {spec!r}") from None
    if count < 1:
        raise ParameterError("grid count must be >= 1")
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0:
        raise ParameterError("grid limits must be finite and >= 0")
    if count == 1:
        return np.array([lo])
    if not lo < hi:
        raise ParameterError("grid needs lo < hi")
    if log:
        if lo <= 0:
            raise ParameterError("log grid needs lo > 0")
        grid = np.geomspace(lo, hi, count)
    else:
        grid = np.linspace(lo, hi, count)
    grid[0], grid[-1] = lo, hi
    return grid


def _frequency_grid(flog, flin, default):
    if flog is not None and flin is not None:
        raise ParameterError("give at most one of --flog and --flin")
    if flin is not None:
        return parse_grid(flin, log=False)
    return parse_grid(flog if flog is not None else default, log=True)


def _duration_choice(duration, infinite):
    """Finite duration, or ``None`` for ``--infinite``; exactly one is required."""
    if infinite and duration is not None:
        raise ParameterError("give either --duration or --infinite, not both")
    if not infinite and duration is None:
        raise ParameterError("one of --duration or --infinite is required")
    return None if infinite else duration


def _model_options(func):
    func = click.option("--y", type=float, default=1.0, show_default=True,
                        help="Attenuation exponent in [0, 2].")(func)
    func = click.option("--alpha0", type=float, default=1.0, show_default=True,
                        help="Attenuation scale.")(func)
    func = click.option("--i0", type=float, default=1.0, show_default=True,
                        help="Initial power.")(func)
    return func


_format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                              default=None, help="Output format.")
_out_option = click.option("--out", type=click.Path(dir_okay=False), default=None,
                           help="Output file (default: stdout).")


# ---------------------------------------------------------------------------
# commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Dissipation-based 1/f power spectra."""


@cli.command("eval")
@_model_options
@click.option("--duration", type=float, required=True, help="Signal duration T > 0.")
@click.option("--flog", default=None, help="Log-spaced grid lo:hi:count.")
@click.option("--flin", default=None, help="Linear grid lo:hi:count.")
@_format_option
@_out_option
@click.pass_context
def eval_cmd(ctx, i0, alpha0, y, duration, flog, flin, fmt, out):
    """Tabulate finite and infinite spectra and R(f) on a frequency grid."""
    model = FiniteSignalModel(DissipationParams(i0, alpha0, y), duration)
    freqs = _frequency_grid(flog, flin, "1e-3:1e2:50")
    rows = [
        {"f": f, "psd_finite": pf, "psd_infinite": pi, "r": r}
        for f, pf, pi, r in zip(
            freqs,
            psd_finite(model, freqs),
            psd_infinite(model.params, freqs),
            augmented_r(model, freqs),
        )
    ]
    header = ["f", "psd_finite", "psd_infinite", "r"]
    if fmt == "json":
        text = to_json(rows) + "\n"
    else:
        text = to_csv(rows, header)
    _write(text, out)
    ctx.exit(EXIT_OK)


@cli.command("band")
@_model_options
@click.option("--duration", type=float, default=None, help="Signal duration T > 0.")
@click.option("--infinite", is_flag=True, help="Integrate the infinite-duration spectrum.")
@click.option("--flo", type=float, required=True, help="Lower band edge >= 0.")
@click.option("--fhi", type=float, required=True, help="Upper band edge.")
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True,
              help="Relative quadrature tolerance.")
@_format_option
@_out_option
@click.pass_context
def band_cmd(ctx, i0, alpha0, y, duration, infinite, flo, fhi, tol, fmt, out):
    """Integrated power over [flo, fhi]."""
    params = DissipationParams(i0, alpha0, y)
    band = Band(flo, fhi)
    duration = _duration_choice(duration, infinite)
    payload = {"band": [band.f_lo, band.f_hi], "mode": "infinite" if infinite else "finite"}
    code = EXIT_OK
    if infinite:
        result = band_power_infinite(params, band)
    else:
        model = FiniteSignalModel(params, duration)
        try:
            result = band_power_finite(model, band, tol)
        except QuadratureError as exc:
            payload["result"] = {"finite": exc.value, "error": exc.error}
            payload["converged"] = False
            _write(report_text(payload, fmt or "json"), out)
            ctx.exit(EXIT_NONCONVERGED)
    if isinstance(result, Divergent):
        payload["result"] = "divergent"
        code = EXIT_DIVERGENT
    else:
        payload["result"] = {"finite": result.value, "error": result.error}
    _write(report_text(payload, fmt or "json"), out)
    ctx.exit(code)


@cli.command("classify")
@_model_options
@click.option("--duration", type=float, default=None, help="Signal duration T > 0.")
@click.option("--infinite", is_flag=True, help="Classify the infinite-duration signal.")
@_format_option
@_out_option
@click.pass_context
def classify_cmd(ctx, i0, alpha0, y, duration, infinite, fmt, out):
    """Whether the power integrated down to f = 0 diverges."""
    params = DissipationParams(i0, alpha0, y)
    duration = _duration_choice(duration, infinite)
    verdict = classify_infrared(params, duration)
    payload = {
        "classification": verdict.value,
        "duration": math.inf if duration is None else float(duration),
        "y": params.y,
    }
    _write(report_text(payload, fmt or "json"), out)
    ctx.exit(EXIT_DIVERGENT if verdict is Classification.DIVERGENT else EXIT_OK)


@cli.command("synth-fit")
@_model_options
@click.option("--duration", type=float, required=True, help="Signal duration T > 0.")
@click.option("--flog", default=None, help="Log-spaced grid lo:hi:count.")
@click.option("--flin", default=None, help="Linear grid lo:hi:count.")
@click.option("--nt", type=int, default=65536, show_default=True,
              help="Number of uniform time steps over [0, T].")
@click.option("--noise", type=float, default=0.0, show_default=True,
              help="Log-standard-deviation of multiplicative noise.")
@click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")
@_format_option
@_out_option
@click.pass_context
def synth_fit_cmd(ctx, i0, alpha0, y, duration, flog, flin, nt, noise, seed, fmt, out):
    """Synthesize decay envelopes, integrate them in time and fit (A, B, y)."""
    model = FiniteSignalModel(DissipationParams(i0, alpha0, y), duration)
    freqs = _frequency_grid(flog, flin, "1e-3:1e1:40")
    if seed < 0:
        raise ParameterError("seed must be >= 0")
    grid = synthesize_grid(model, freqs, uniform_times(duration, nt), noise, seed)
    fit = fit_spectrum(estimate_psd(grid))
    payload = {
        "canonical": {"A": fit.params.A, "B": fit.params.B, "y": fit.params.y},
        "converged": fit.converged,
        "residual": fit.residual,
        "seed": seed,
    }
    _write(report_text(payload, fmt or "json"), out)
    ctx.exit(EXIT_OK)


@cli.command("turb")
@click.option("--c", "correction", type=float, default=None,
              help="Intermittency correction c >= 0.")
@click.option("--dimension", type=float, default=None,
              help="Fractal dimension D in (2, 3].")
@_format_option
@_out_option
@click.pass_context
def turb_cmd(ctx, correction, dimension, fmt, out):
    """Turbulence spectral exponent 5/3 + c and its admissibility."""
    if (correction is None) == (dimension is None):
        raise ParameterError("give exactly one of --c and --dimension")
    if correction is not None:
        exponent = TurbulenceExponent.from_correction(correction)
    else:
        exponent = TurbulenceExponent.from_dimension(dimension)
    payload = {
        "admissible": exponent.admissible,
        "beta": exponent.beta,
        "c": exponent.c,
        "d": exponent.d,
    }
    _write(report_text(payload, fmt or "json"), out)
    ctx.exit(EXIT_OK if exponent.admissible else EXIT_DIVERGENT)


def main(argv=None):
    """Console entry point; maps every failure onto the documented exit codes."""
    try:
        code = cli.main(args=argv, prog_name="dissipspec", standalone_mode=False)
    except ParameterError as exc:
        click.echo(f"error: {exc}", err=True)
        code = EXIT_INVALID
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        code = EXIT_INVALID
    except click.Abort:
        click.echo("error: aborted", err=True)
        code = EXIT_INVALID
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        code = EXIT_INVALID
    sys.exit(code or 0)


if __name__ == "__main__":
    main()
