"""Command-line front end.

Subcommands::

    slabspp dispersion  --config run.ini --out dispersion.csv
    slabspp gain-sweep  --config run.ini --out gain_sweep.csv
    slabspp field       --config run.ini --out field.csv [--compare]
    slabspp verify      --config run.ini --out verify_report.csv

Configuration is a flat INI file; every key has a documented default, and
unknown sections or keys are rejected.  ``--dump-config`` prints the fully
defaulted configuration that reproduces the run and exits.  Output files are
CSV with '.' decimal separator, ',' field separator, '#'-prefixed metadata
lines and 17-significant-digit floats, written atomically (temp file plus
rename) so reruns are byte-identical and never observed half-written.

Exit status: 0 on full success, 1 if any row failed to converge or any
verification check failed, 2 on usage/configuration errors.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
import tempfile

import numpy as np

from . import oracles
from .dispersion import (
    PARITIES,
    DispersionError,
    SlabGeometry,
    dispersion_sweep,
    gain_sweep,
    parity_from_name,
    solve_dispersion,
)
from .fields import NeutralModeSingularity, SppState, compare_states, h_field_mean
from .media import DielectricSpec, DrudeMetalSpec, make_medium_set
from .modes import green_coefficient, normalization
from .quantization import (
    CROSS_DIRECTION,
    SAME_DIRECTION,
    ccr_check,
    commutator,
    commutator_numeric,
    green_identity_check,
)

__all__ = ["main", "ConfigError", "load_config", "dump_config",
           "write_profile_csv"]


class ConfigError(Exception):
    """Invalid or unknown configuration content."""


# ---------------------------------------------------------------------------
# configuration schema: {section: {key: (parser, default-as-string)}}
# ---------------------------------------------------------------------------

def _parse_parities(text: str):
    text = text.strip().lower()
    if text == "both":
        return PARITIES
    return (parity_from_name(text),)


def _parse_z_values(text: str):
    return text  # resolved later against the geometry


_SCHEMA = {
    "metal": {
        "omega_p": (float, "1.402e16"),
        "gamma": (float, "6.25e13"),
        "eps_re": (float, None),
        "eps_im": (float, None),
    },
    "dielectric": {
        "n_real": (float, "0.9726"),
        "n_imag": (float, "-0.063"),
    },
    "geometry": {
        "d": (float, "6e-08"),
    },
    "dispersion": {
        "omega_min": (float, "1e15"),
        "omega_max": (float, "8e15"),
        "omega_points": (int, "36"),
        "parities": (_parse_parities, "both"),
    },
    "gain-sweep": {
        "omega": (float, "4.8e15"),
        "kappa_min": (float, "-0.1"),
        "kappa_max": (float, "0.0"),
        "kappa_points": (int, "41"),
        "parities": (_parse_parities, "both"),
    },
    "field": {
        "omega": (float, "4.8e15"),
        "parity": (parity_from_name, "symmetric"),
        "alpha_mag": (float, "2.6457513110645907"),
        "alpha_phase": (float, "1.5"),
        "xi_mag": (float, "0.0"),
        "xi_phase": (float, "0.0"),
        "x_min": (float, "0.0"),
        "x_max": (str, "auto"),
        "x_points": (int, "500"),
        "z_values": (_parse_z_values, "interfaces"),
    },
    "verify": {
        "omega": (float, "4.8e15"),
        "thick_d": (float, "2e-06"),
    },
}

_DEFAULT_OUT = {
    "dispersion": "dispersion.csv",
    "gain-sweep": "gain_sweep.csv",
    "field": "field.csv",
    "verify": "verify_report.csv",
}


def load_config(path=None) -> dict:
    """Parse and validate an INI config; missing keys take defaults."""
    cp = configparser.ConfigParser()
    if path is not None:
        read = cp.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key in cp[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    cfg: dict = {}
    for section, keys in _SCHEMA.items():
        cfg[section] = {}
        for key, (parse, default) in keys.items():
            if cp.has_option(section, key):
                raw = cp.get(section, key)
            else:
                raw = default
            if raw is None:
                cfg[section][key] = None
                continue
            try:
                cfg[section][key] = parse(raw)
            except (ValueError, TypeError) as exc:
                raise ConfigError(
                    f"bad value for {key} in [{section}]: {raw!r} ({exc})"
                ) from None

    m = cfg["metal"]
    direct = [k for k in ("eps_re", "eps_im")
              if path is not None and cp.has_option("metal", k)]
    drude = [k for k in ("omega_p", "gamma")
             if path is not None and cp.has_option("metal", k)]
    if direct:
        if len(direct) != 2:
            raise ConfigError("metal: eps_re and eps_im must be given together")
        if drude:
            raise ConfigError(
                "metal: give either omega_p/gamma or eps_re/eps_im, not both")
        m["mode"] = "direct"
    else:
        m["mode"] = "drude"
    return cfg


def _metal_of(cfg):
    m = cfg["metal"]
    if m["mode"] == "direct":
        return complex(m["eps_re"], m["eps_im"])
    return DrudeMetalSpec(omega_p=m["omega_p"], gamma=m["gamma"])


def _dielectric_of(cfg):
    return DielectricSpec(cfg["dielectric"]["n_real"],
                          cfg["dielectric"]["n_imag"])


def _geometry_of(cfg):
    return SlabGeometry(d=cfg["geometry"]["d"])


def dump_config(cfg) -> str:
    """Re-emit the fully defaulted configuration as INI text."""
    lines = []
    for section, keys in _SCHEMA.items():
        lines.append(f"[{section}]")
        for key in keys:
            if section == "metal":
                mode = cfg["metal"]["mode"]
                if mode == "drude" and key in ("eps_re", "eps_im"):
                    continue
                if mode == "direct" and key in ("omega_p", "gamma"):
                    continue
            val = cfg[section][key]
            if val is None:
                continue
            if isinstance(val, float):
                lines.append(f"{key} = {_g(val)}")
            elif isinstance(val, tuple):  # parity tuple
                lines.append(f"{key} = "
                             + ("both" if len(val) > 1 else val[0].name))
            elif hasattr(val, "name"):  # single parity
                lines.append(f"{key} = {val.name}")
            else:
                lines.append(f"{key} = {val}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CSV helpers
# ---------------------------------------------------------------------------

def _g(x: float) -> str:
    return f"{x:.17g}"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".slabspp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path, meta_lines, header, rows, trailer_lines=()):
    parts = [f"# {line}" for line in meta_lines]
    parts.append(",".join(header))
    parts.extend(",".join(row) for row in rows)
    parts.extend(f"# {line}" for line in trailer_lines)
    _atomic_write(path, "\n".join(parts) + "\n")


def _media_meta(cfg):
    m = cfg["metal"]
    if m["mode"] == "direct":
        metal = f"metal eps = {_g(m['eps_re'])}{m['eps_im']:+.17g}j (fixed)"
    else:
        metal = (f"metal drude omega_p = {_g(m['omega_p'])} rad/s, "
                 f"gamma = {_g(m['gamma'])} rad/s")
    diel = (f"dielectric n = {_g(cfg['dielectric']['n_real'])} "
            f"{cfg['dielectric']['n_imag']:+.17g}j")
    return [metal, diel, f"film thickness d = {_g(cfg['geometry']['d'])} m"]


def write_profile_csv(sol, xs, zs, path) -> None:
    """Sample the vector-potential profile on a grid and write it as CSV."""
    from .modes import mode_profile

    rows = []
    for x in xs:
        for z in zs:
            ax, az = mode_profile(sol, x, z)
            rows.append([_g(x), _g(z), _g(ax.real), _g(ax.imag),
                         _g(az.real), _g(az.imag)])
    meta = [
        "slabspp mode profile",
        f"parity = {sol.parity.name}",
        f"omega_rad_s = {_g(sol.omega)}",
        f"k_spp = {_g(sol.k_spp.real)}{sol.k_spp.imag:+.17g}j",
    ]
    _write_csv(path, meta, ["x_m", "z_m", "re_Ax", "im_Ax", "re_Az", "im_Az"],
               rows)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_dispersion(cfg, out_path) -> int:
    sec = cfg["dispersion"]
    if sec["omega_points"] < 1:
        raise ConfigError("dispersion: omega_points must be >= 1")
    omegas = np.linspace(sec["omega_min"], sec["omega_max"],
                         sec["omega_points"])
    rows_out = []
    failures = 0
    rows = dispersion_sweep(sec["parities"], _geometry_of(cfg),
                            _metal_of(cfg), _dielectric_of(cfg), omegas)
    for row in rows:
        if row.solution is None:
            failures += 1
            msg = row.error.replace(",", ";")
            rows_out.append([_g(row.x), row.parity.name] + ["nan"] * 7
                            + [f"error: {msg}"])
            continue
        s = row.solution
        rows_out.append([
            _g(row.x), row.parity.name,
            _g(s.k_spp.real), _g(s.k_spp.imag),
            _g(s.nu0.real), _g(s.nu0.imag),
            _g(s.num.real), _g(s.num.imag),
            _g(s.residual), s.regime,
        ])
    meta = ["slabspp dispersion sweep"] + _media_meta(cfg) + [
        f"omega grid: {_g(sec['omega_min'])} .. {_g(sec['omega_max'])} rad/s, "
        f"{sec['omega_points']} points"]
    header = ["omega_rad_s", "parity", "re_k", "im_k", "re_nu0", "im_nu0",
              "re_num", "im_num", "residual", "regime"]
    _write_csv(out_path, meta, header, rows_out)
    print(f"wrote {out_path}: {len(rows_out)} rows, {failures} failed")
    return 1 if failures else 0


def _cmd_gain_sweep(cfg, out_path) -> int:
    sec = cfg["gain-sweep"]
    if sec["kappa_points"] < 1:
        raise ConfigError("gain-sweep: kappa_points must be >= 1")
    kappas = np.linspace(sec["kappa_min"], sec["kappa_max"],
                         sec["kappa_points"])
    result = gain_sweep(sec["parities"], _geometry_of(cfg), _metal_of(cfg),
                        cfg["dielectric"]["n_real"], kappas, sec["omega"])
    rows_out = []
    failures = 0
    for row in result.rows:
        if row.solution is None:
            failures += 1
            msg = row.error.replace(",", ";")
            rows_out.append([_g(row.x), row.parity.name, "nan", "nan",
                             f"error: {msg}"])
            continue
        s = row.solution
        rows_out.append([_g(row.x), row.parity.name, _g(s.k_spp.real),
                         _g(s.k_spp.imag), s.regime])
    trailer = [f"continuation: kappa from {_g(kappas[0])} to {_g(kappas[-1])}"]
    for parity in sec["parities"]:
        crossing = result.crossings.get(parity.name)
        if crossing is None:
            trailer.append(f"crossing {parity.name}: none in grid")
        else:
            trailer.append(
                f"crossing {parity.name}: kappa_star = {_g(crossing.kappa_star)}"
                f", re_k = {_g(crossing.k_at_crossing.real)}"
                f", im_k = {_g(crossing.k_at_crossing.imag)}")
    meta = ["slabspp gain sweep"] + _media_meta(cfg) + [
        f"omega = {_g(sec['omega'])} rad/s (cladding n_imag swept)"]
    _write_csv(out_path, meta, ["kappa_d", "parity", "re_k", "im_k", "regime"],
               rows_out, trailer)
    for line in trailer:
        print(line)
    return 1 if failures else 0


def _resolve_field_grid(cfg, sol, geom):
    sec = cfg["field"]
    if sec["x_max"] == "auto":
        ki = abs(sol.k_spp.imag)
        if ki < 1e-20:
            raise NeutralModeSingularity(
                "neutral mode: set an explicit x_max")
        x_max = 5.0 / ki
    else:
        x_max = float(sec["x_max"])
    xs = np.linspace(sec["x_min"], x_max, sec["x_points"])
    ztext = sec["z_values"]
    if ztext.strip() == "interfaces":
        zs = np.array([0.0, geom.d])
    else:
        try:
            zs = np.array([float(t) for t in ztext.split(",") if t.strip()])
        except ValueError:
            raise ConfigError(f"field: bad z_values {ztext!r}") from None
        if zs.size == 0:
            raise ConfigError("field: z_values is empty")
    return xs, zs


def _cmd_field(cfg, out_path, compare: bool, textbook: bool) -> int:
    sec = cfg["field"]
    media = make_medium_set(_metal_of(cfg), _dielectric_of(cfg), sec["omega"])
    geom = _geometry_of(cfg)
    sol = solve_dispersion(sec["parity"], geom, media)
    grid = _resolve_field_grid(cfg, sol, geom)
    state = SppState(alpha_mag=sec["alpha_mag"],
                     alpha_phase=sec["alpha_phase"],
                     xi_mag=sec["xi_mag"], xi_phase=sec["xi_phase"])
    if compare:
        coherent = SppState(alpha_mag=sec["alpha_mag"],
                            alpha_phase=sec["alpha_phase"])
        samples = compare_states(sol, geom, coherent, state, grid=grid,
                                 textbook_squeeze=textbook)
    else:
        samples = h_field_mean(sol, geom, state, grid=grid,
                               textbook_squeeze=textbook)
    rows = []
    for i, x in enumerate(samples.xs):
        for j, z in enumerate(samples.zs):
            v = samples.values[i, j]
            rows.append([_g(x), _g(z), _g(v.real), _g(v.imag), _g(abs(v))])
    meta = (["slabspp mean magnetic field"
             + (" (coherent minus squeezed)" if compare else "")]
            + _media_meta(cfg) + [
        f"omega = {_g(sec['omega'])} rad/s, parity = {sol.parity.name}",
        f"k_spp = {_g(sol.k_spp.real)}{sol.k_spp.imag:+.17g}j rad/m "
        f"({sol.regime})",
        f"state: {samples.meta['state']}",
        f"textbook_squeeze = {textbook}",
    ])
    _write_csv(out_path, meta, ["x_m", "z_m", "re_H", "im_H", "abs_H"], rows)
    print(f"wrote {out_path}: {len(rows)} samples, mode {sol.regime}")
    return 0


def _verify_checks(cfg, tolerance, printed_labels=False):
    """Yield (check, parity, omega, value, tol, passed) tuples."""
    omega = cfg["verify"]["omega"]
    metal = _metal_of(cfg)
    dielectric = _dielectric_of(cfg)
    geom = _geometry_of(cfg)
    media = make_medium_set(metal, dielectric, omega)

    def tol(default):
        return default if tolerance is None else tolerance

    for parity in PARITIES:
        try:
            sol = solve_dispersion(parity, geom, media)
        except (DispersionError, ValueError) as exc:
            yield ("solve", parity.name, omega, math.nan, tol(1e-10),
                   False, f"{type(exc).__name__}: {exc}")
            continue

        value = abs(ccr_check(sol, geom, media,
                              printed_labels=printed_labels) - 1.0)
        yield ("ccr_closure", parity.name, omega, value, tol(1e-12),
               value <= tol(1e-12), "")

        ell = min(1.0 / max(abs(sol.k_spp.imag), 1e-20),
                  400.0 * math.pi / sol.k_spp.real)
        pairs = {
            SAME_DIRECTION: (0.317 * ell, 0.93 * ell),
            CROSS_DIRECTION: (1.531 * ell, 0.214 * ell),
        }
        for kind, (x, xp) in pairs.items():
            name = f"commutator_{kind}"
            try:
                closed = commutator(kind, x, xp, sol)
                numeric = commutator_numeric(kind, x, xp, sol)
                scale = max(abs(closed), abs(numeric), 1e-12)
                value = abs(closed - numeric) / scale
                yield (name, parity.name, omega, value, tol(1e-6),
                       value <= tol(1e-6), "")
            except (ValueError, oracles.QuadratureError) as exc:
                yield (name, parity.name, omega, math.nan, tol(1e-6), False,
                       f"{type(exc).__name__}: {exc}")

        try:
            value = green_identity_check(sol, geom, media)
            yield ("green_identity", parity.name, omega, value, tol(1e-6),
                   value <= tol(1e-6), "")
        except (ValueError, oracles.QuadratureError) as exc:
            yield ("green_identity", parity.name, omega, math.nan, tol(1e-6),
                   False, f"{type(exc).__name__}: {exc}")

        n_closed = normalization(sol, geom)
        n_quad = oracles.normalization_quadrature(sol)
        value = abs(n_closed - n_quad) / abs(n_quad)
        yield ("normalization_quadrature", parity.name, omega, value,
               tol(1e-8), value <= tol(1e-8), "")

        zc = 1.0 / sol.nu0.real
        depths = np.concatenate([
            -np.linspace(0.05, 2.0, 20) * zc,
            np.linspace(0.0321, 0.9679, 20) * geom.d,
            geom.d + np.linspace(0.05, 2.0, 20) * zc,
        ])
        value = max(oracles.curl_consistency_error(sol, z) for z in depths)
        yield ("curl_consistency", parity.name, omega, value, tol(1e-6),
               value <= tol(1e-6), "")

    thick = oracles.thick_film_degeneracy(metal, dielectric, omega,
                                          d=cfg["verify"]["thick_d"])
    value = thick["rel_split"]
    yield ("thick_film_parity_split", "both", omega, value, tol(1e-8),
           value <= tol(1e-8), "")
    value = max(thick["rel_offset_symmetric"],
                thick["rel_offset_antisymmetric"])
    yield ("thick_film_single_interface", "both", omega, value, tol(1e-9),
           value <= tol(1e-9), "")


def _cmd_verify(cfg, out_path, tolerance, printed_labels=False) -> int:
    rows = []
    all_pass = True
    for (check, parity, omega, value, tol, ok, note) in _verify_checks(
            cfg, tolerance, printed_labels):
        status = "pass" if ok else "FAIL"
        all_pass &= ok
        note_field = note.replace(",", ";") if note else ""
        rows.append([check, parity, _g(omega), _g(value), _g(tol), status,
                     note_field])
        print(f"{check:28s} {parity:13s} {_g(value):>24s} "
              f"(tol {tol:g}) {status}")
    meta = ["slabspp verification report"] + _media_meta(cfg)
    header = ["check", "parity", "omega_rad_s", "value", "tolerance",
              "status", "note"]
    _write_csv(out_path, meta, header, rows)
    print(f"wrote {out_path}: {'all checks pass' if all_pass else 'FAILURES'}")
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="slabspp",
        description="Quantized TM surface modes of a metal film between "
                    "identical (possibly amplifying) dielectrics.",
        epilog="Global options (--config, --out, ...) go before the "
               "subcommand: slabspp --out run.csv dispersion")
    ap.add_argument("--config", metavar="PATH",
                    help="INI configuration file (defaults used if omitted)")
    ap.add_argument("--out", metavar="PATH",
                    help="output file (per-command default otherwise)")
    ap.add_argument("--tolerance", type=float, metavar="TOL",
                    help="override every verification tolerance")
    ap.add_argument("--printed-gamma-labels", action="store_true",
                    help="use the historical swapped region labels in the "
                         "gain/loss overlap weight")
    ap.add_argument("--textbook-squeeze", action="store_true",
                    help="conjugate the displacement in the squeezed ladder "
                         "mean")
    ap.add_argument("--dump-config", action="store_true",
                    help="print the fully defaulted config and exit")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("dispersion", help="trace both parities over a frequency "
                                      "grid")
    sub.add_parser("gain-sweep", help="trace both parities over cladding "
                                      "gain at fixed frequency")
    fp = sub.add_parser("field", help="mean magnetic field of a launched "
                                      "state")
    fp.add_argument("--compare", action="store_true",
                    help="emit coherent-minus-squeezed difference instead")
    sub.add_parser("verify", help="run every numerical cross-check")
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.dump_config:
        sys.stdout.write(dump_config(cfg))
        return 0
    out_path = args.out or _DEFAULT_OUT[args.command]
    try:
        if args.command == "dispersion":
            return _cmd_dispersion(cfg, out_path)
        if args.command == "gain-sweep":
            return _cmd_gain_sweep(cfg, out_path)
        if args.command == "field":
            return _cmd_field(cfg, out_path, compare=args.compare,
                              textbook=args.textbook_squeeze)
        if args.command == "verify":
            return _cmd_verify(cfg, out_path, args.tolerance,
                               printed_labels=args.printed_gamma_labels)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DispersionError, NeutralModeSingularity) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
