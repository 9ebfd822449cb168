"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 verification failure,
3 resource bound exceeded.  Output files never contain timestamps; lines
starting with ``#`` are metadata.

Seeded initial states (``random:<seed>``) draw from numpy's PCG64 bit
generator, ``numpy.random.Generator(numpy.random.PCG64(seed))``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import chain, cogwheel, dirac, hilbert, kinematics
from .errors import NecklaceError, ValidationError, VerificationFailure
from .matrices import expm_hermitian, max_abs, to_csv, unitarity_defect
from .render import render_ascii, render_svg
from .trace import SpacetimeTrace, read_trace


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _read_values(path: str) -> list[int]:
    text = Path(path).read_text(encoding="ascii")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if lines and lines[0].startswith("S="):
        return read_trace(path).rows[0].tolist()
    if not lines:
        raise ValidationError(f"{path}: no values")
    return [int(tok) for tok in lines[0].split()]


def parse_chain_init(spec: str, S: int) -> chain.ChainState:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "uniform":
            return chain.ChainState.uniform(S, int(arg or 1))
        if kind == "defect":
            return chain.ChainState.with_defect(S, int(arg))
        if kind == "random":
            return chain.ChainState.random(S, _rng(int(arg)))
        if kind == "file":
            state = chain.ChainState(tuple(_read_values(arg)))
            if state.S != S:
                raise ValidationError(f"{arg}: state has S={state.S}, expected {S}")
            return state
    except (ValueError, OSError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad init spec {spec!r}: {exc}") from None
    raise ValidationError(f"unknown init spec {spec!r}")


def parse_dirac_init(spec: str, S: int, M: int) -> dirac.GenChainState:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "uniform":
            return dirac.GenChainState(S, M, (int(arg or 0),) * (2 * S))
        if kind == "defect":
            site, _, value = arg.partition(":")
            values = [0] * (2 * S)
            site = int(site)
            if not 1 <= site <= 2 * S:
                raise ValidationError(f"site {site} outside 1..{2 * S}")
            values[site - 1] = int(value or 1)
            return dirac.GenChainState(S, M, tuple(values))
        if kind == "random":
            vals = _rng(int(arg)).integers(-M, M + 1, size=2 * S)
            return dirac.GenChainState(S, M, tuple(vals.tolist()))
        if kind == "file":
            return dirac.GenChainState(S, M, tuple(_read_values(arg)))
    except (ValueError, OSError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad init spec {spec!r}: {exc}") from None
    raise ValidationError(f"unknown init spec {spec!r}")


def _fmt(x: float) -> str:
    return repr(float(x) + 0.0)


def _report(pairs) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


class _Output:
    """Collects files for one command; nothing is written without ``--out``."""

    def __init__(self, out: str | None):
        self.dir = Path(out) if out else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str):
        if self.dir:
            (self.dir / name).write_text(text, encoding="ascii")


def _emit_trace(trace: SpacetimeTrace, out: _Output, render: str):
    out.write("trace.txt", trace.to_text())
    if render == "ascii":
        diagram = render_ascii(trace)
        out.write("diagram.txt", diagram)
        sys.stdout.write(diagram)
    elif render == "svg":
        out.write("diagram.svg", render_svg(trace))


# --- commands -------------------------------------------------------------------------


def cmd_cogwheel(args) -> int:
    spec = cogwheel.CogwheelSpec(args.n, args.t)
    u = cogwheel.step_matrix(spec)
    h = cogwheel.hamiltonian_standard_basis(spec)
    ev = cogwheel.eigenvalues_H(spec)
    residual = max_abs(expm_hermitian(h, spec.T) - u)
    report = _report([
        ("N", spec.N), ("T", _fmt(spec.T)),
        ("roundtrip_residual", _fmt(residual)),
        ("unitarity_defect", _fmt(unitarity_defect(u))),
        ("dft_deviation", _fmt(max_abs(cogwheel.hamiltonian_via_dft(spec) - h))),
    ])
    out = _Output(args.out)
    out.write("step_matrix.csv", to_csv(u))
    out.write("hamiltonian.csv", to_csv(h))
    out.write("eigenvalues.txt", "".join(_fmt(e) + "\n" for e in ev))
    out.write("report.txt", report)
    sys.stdout.write(report)
    return 0


def cmd_chain(args) -> int:
    state = parse_chain_init(args.init, args.s)
    trace = chain.evolve(state, args.steps)
    _emit_trace(trace, _Output(args.out), args.render)
    return 0


def cmd_slowdown(args) -> int:
    spec = kinematics.SlowdownSpec(args.k0, args.l0, args.case)
    state = parse_chain_init(args.init, args.s)
    trace = kinematics.evolve_slowdown(state, spec, args.cycles)
    out = _Output(args.out)
    _emit_trace(trace, out, args.render)
    lines = [("k0", spec.k0), ("l0", spec.l0), ("case", spec.mode.value),
             ("expected_velocity", spec.velocity)]
    if args.cycles:
        lines.append(("weyl_residual", kinematics.check_weyl_combination(trace)))
        try:
            lines.append(("measured_velocity", kinematics.measure_velocity(trace)))
        except ValidationError:
            lines.append(("measured_velocity", "na"))
    report = _report(lines)
    out.write("report.txt", report)
    if args.render != "ascii":
        sys.stdout.write(report)
    return 0


def cmd_hamiltonian(args) -> int:
    u = hilbert.chain_update_on_basis(args.s)
    blocks = hilbert.orbit_blocks(u, args.t)
    lines = [("S", args.s), ("T", _fmt(args.t)), ("dim", u.size), ("orbits", len(blocks)),
             ("orbit_roundtrip_residual", _fmt(hilbert.orbit_roundtrip_error(blocks, args.t)))]
    out = _Output(args.out)
    if 2 * args.s <= 10:
        h = hilbert.generator_from_blocks(blocks, u.size).toarray()
        lines.append(("dense_roundtrip_residual",
                      _fmt(max_abs(expm_hermitian(h, args.t) - hilbert.lift(u)))))
        out.write("hamiltonian.csv", to_csv(h))
    if 2 * args.s <= hilbert.COTANGENT_MAX_SITES:
        closed = hilbert.cotangent_sum_generator(u, args.s, args.t)
        proj, basis = hilbert.projected_deviation(
            closed, hilbert.generator_from_blocks(blocks, u.size), u)
        lines += [("cotangent_form_deviation", _fmt(proj)),
                  ("cotangent_form_basis_deviation", _fmt(basis))]
    out.write("orbits.txt", "".join(ln + "\n" for ln in hilbert.orbit_report(u)))
    report = _report(lines)
    out.write("report.txt", report)
    sys.stdout.write(report)
    return 0


def cmd_perturb(args) -> int:
    state = parse_chain_init(args.init, args.s)
    dim = 1 << (2 * args.s)
    start = hilbert.basis_vector(dim, hilbert.BasisIndexer(args.s).encode(state))
    rows = ["# epsilon measure"]
    for eps in args.epsilon:
        v = hilbert.perturbed_update(start, args.s, eps)
        rows.append(f"{_fmt(eps)} {_fmt(hilbert.superposition_measure(v))}")
    text = "\n".join(rows) + "\n"
    _Output(args.out).write("sweep.txt", text)
    sys.stdout.write(text)
    return 0


def cmd_dirac(args) -> int:
    if args.table:
        text = "".join(dirac.build_table(args.m, k).to_text() + "\n" for k in dirac.Kind)
        _Output(args.out).write("tables.txt", text)
        sys.stdout.write(text)
        return 0
    if args.s is None:
        raise ValidationError("--s is required unless --table is given")
    spec = dirac.DiracSpec(args.s, args.m, args.mu)
    state = parse_dirac_init(args.init, args.s, args.m)
    trace = dirac.evolve(state, spec, args.steps)
    _emit_trace(trace, _Output(args.out), args.render)
    return 0


def cmd_dirac_verify(args) -> int:
    spec = dirac.DiracSpec(args.s, args.m, args.mu)
    result = dirac.verify_bijective(spec, args.mode)
    lines = []
    if result.mode is dirac.Mode.EXHAUSTIVE:
        verdict = "bijective" if result.bijective else "not bijective"
        lines.append(f"{verdict}, {result.image_size}/{result.n_configs}")
        if result.bijective:
            hist = dirac.cycle_decompose(result.certificate).histogram()
            lines.append("cycle_lengths " + " ".join(f"{k}:{v}" for k, v in hist.items()))
    else:
        verdict = "bijective" if result.bijective else "not bijective"
        lines.append(f"{verdict} (modular), configurations={result.n_configs}")
    lines.append(f"determinant={result.determinant} modulus={spec.modulus}")
    text = "\n".join(lines) + "\n"
    _Output(args.out).write("verify.txt", text)
    sys.stdout.write(text)
    if not result.bijective:
        raise VerificationFailure(f"update is not bijective for S={spec.S} M={spec.M} mu={spec.mu}")
    return 0


def cmd_render(args) -> int:
    trace = read_trace(args.trace)
    text = render_ascii(trace) if args.format == "ascii" else render_svg(trace)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    return 0


# --- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="necklace", description="Permutation-dynamics spin chains and the Dirac necklace automaton.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cogwheel", help="cogwheel step matrix, Hamiltonian and round trip")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--t", type=float, default=1.0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_cogwheel)

    def add_render(sp):
        sp.add_argument("--render", choices=("ascii", "svg", "none"), default="none")
        sp.add_argument("--out")

    c = sub.add_parser("chain", help="evolve the Ising exchange chain")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--steps", type=int, required=True)
    c.add_argument("--init", default="uniform:1")
    add_render(c)
    c.set_defaults(func=cmd_chain)

    c = sub.add_parser("slowdown", help="Case A / Case B slowed-down evolution")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--k0", type=int, required=True)
    c.add_argument("--l0", type=int, required=True)
    c.add_argument("--case", choices=("A", "B"), default="A")
    c.add_argument("--cycles", type=int, default=1)
    c.add_argument("--init", default="defect:2")
    add_render(c)
    c.set_defaults(func=cmd_slowdown)

    c = sub.add_parser("hamiltonian", help="orbit-wise chain Hamiltonian and checks")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--t", type=float, default=1.0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_hamiltonian)

    c = sub.add_parser("perturb", help="superposition measure after a perturbed update")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--epsilon", type=float, nargs="+", default=[0.0, 1e-3, 1e-2, 1e-1])
    c.add_argument("--init", default="defect:1")
    c.add_argument("--out")
    c.set_defaults(func=cmd_perturb)

    c = sub.add_parser("dirac", help="evolve the Dirac necklace automaton or print tables")
    c.add_argument("--s", type=int)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--mu", type=int, default=1)
    c.add_argument("--steps", type=int, default=8)
    c.add_argument("--init", default="defect:1")
    c.add_argument("--table", action="store_true")
    add_render(c)
    c.set_defaults(func=cmd_dirac)

    c = sub.add_parser("dirac-verify", help="bijectivity of the Dirac update")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--mu", type=int, default=1)
    c.add_argument("--mode", choices=[m.value for m in dirac.Mode], default="auto")
    c.add_argument("--out")
    c.set_defaults(func=cmd_dirac_verify)

    c = sub.add_parser("render", help="draw a trace file")
    c.add_argument("trace")
    c.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    c.add_argument("--out")
    c.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NecklaceError as exc:
        print(f"necklace: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
