import argparse
import dataclasses
import logging
import sys

import config
import data
import report
import utils
from analysis import curve_geometry as cg
from analysis import g_fields, tangent_spaces as ts
from analysis.jet_algebra import format_jet
from analysis.reproduce import reproduce, suite_names
from errors import GermlabError, InvariantViolation, UserInputError

log = logging.getLogger("germlab")


class GermlabParser(argparse.ArgumentParser):
    """Usage errors are user errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        raise UserInputError(f"{self.prog}: {message}")


def build_parser():
    common = GermlabParser(add_help=False)
    common.add_argument('--format', choices=['json', 'table'], default='json')
    common.add_argument('--tol', type=float, default=None, help="Residual tolerance override")
    common.add_argument('--jet-order', type=int, default=None,
                        help=f"Jet order k (default {config.DEFAULT_JET_ORDER}; geometry commands use the germ's own order)")
    common.add_argument('--exact-germ', action='store_true', help="Germ is polynomial: its jet is exact at every order")
    common.add_argument('--verbose', action='store_true')
    common.add_argument('--quiet', action='store_true')

    parser = GermlabParser(prog='germlab', description="Jet calculus for G-structured map germs.")
    sub = parser.add_subparsers(dest='command', parser_class=GermlabParser)
    sub.required = True

    p = sub.add_parser('gfields', parents=[common], help="θ[G] jet dimensions")
    p.add_argument('--group', required=True)
    p.add_argument('--include-constants', action='store_true', help="θ[G] instead of θ[G]₀")
    p.add_argument('--per-degree', action='store_true', help="List the basis fields of each degree")
    p.add_argument('--closed-form', action='store_true', help="Compare with the closed-form generators")
    p.add_argument('--ring', action='store_true', help="Also report the ring of the group")

    p = sub.add_parser('ring', parents=[common], help="jets of the ring E_p[G]")
    p.add_argument('--group', required=True)

    p = sub.add_parser('tangent', parents=[common], help="tangent space and codimension")
    p.add_argument('--germ', required=True)
    p.add_argument('--group', required=True)
    p.add_argument('--eq', choices=[e.value for e in ts.Equivalence], default='ag')
    p.add_argument('--extended', action='store_true')

    p = sub.add_parser('moduli', parents=[common], help="relative infinitesimal moduli")
    p.add_argument('--germ', required=True)
    p.add_argument('--pair', choices=[e.value for e in ts.Pair], required=True)
    p.add_argument('--group', required=True)
    p.add_argument('--subgroup')

    p = sub.add_parser('rigidity', parents=[common], help="linear-only check and tangent equality on germs")
    p.add_argument('--group', required=True)
    p.add_argument('--germ', action='append', help="Germ file or fixture (repeatable); default: fixtures of matching p")

    p = sub.add_parser('growth', parents=[common], help="codimension growth over jet orders")
    p.add_argument('--germ', required=True)
    p.add_argument('--group', required=True)
    p.add_argument('--eq', choices=[e.value for e in ts.Equivalence], default='ag')
    p.add_argument('--k-min', type=int, default=config.GROWTH_K_MIN)
    p.add_argument('--k-max', type=int, default=config.GROWTH_K_MAX)
    p.add_argument('--extended', action=argparse.BooleanOptionalAction, default=True)

    p = sub.add_parser('normal-form', parents=[common], help="A_k curve or Monge surface normal form")
    p.add_argument('--germ', required=True)
    p.add_argument('--kind', choices=['ak', 'monge'], required=True)

    p = sub.add_parser('invariants', parents=[common], help="curve invariants")
    p.add_argument('--germ', required=True)
    p.add_argument('--kind', choices=['curvature', 'frontal', 'equiaffine'], required=True)

    p = sub.add_parser('congruent', parents=[common], help="Euclidean or equi-affine congruence of two curves")
    p.add_argument('--germ-a', required=True)
    p.add_argument('--germ-b', required=True)
    p.add_argument('--mode', choices=[m.value for m in cg.CongruenceMode], required=True)

    p = sub.add_parser('reproduce', parents=[common], help="acceptance suite")
    p.add_argument('suite', nargs='?', choices=suite_names(), default=None)
    p.add_argument('--all', action='store_true')
    p.add_argument('--quick', action='store_true', help="Reduced trial counts")

    return parser


# --- GERM LOADING ---

def load_germ(spec, k, exact_flag, notes):
    """Parse a germ file or fixture at jet order k; k=None keeps the file's order."""
    gf = data.germ_from_spec(spec)
    if k is None:
        return gf.to_germ()
    exact = gf.exact_germ or exact_flag
    if not exact and gf.order < k + 1:
        msg = (f"germ '{gf.name or spec}' is given to order {gf.order}; jet order {k} results "
               f"assume it is {k}-determined (pass --exact-germ for polynomial germs)")
        log.warning(msg)
        notes.append(msg)
    if gf.order != k:
        gf = dataclasses.replace(gf, order=k)
    return gf.to_germ()


def _k(args):
    return config.DEFAULT_JET_ORDER if args.jet_order is None else args.jet_order


def _tol(args, default):
    return default if args.tol is None else args.tol


# --- COMMANDS ---

def cmd_gfields(args):
    g = utils.resolve_group(args.group)
    k = _k(args)
    space = g_fields.theta_g_jet(g, k, args.include_constants)
    out = {
        'group': g.spec, 'display': g.display, 'k': k, 'include_constants': args.include_constants,
        'total_dim': space.total_dim, 'dims_by_degree': space.dims_by_degree(),
    }
    if args.per_degree:
        out['fields'] = {d: [str(f) for f in space.degree_fields(d)] for d in sorted(space.per_degree)}
    if args.closed_form:
        closed = g_fields.closed_form_basis(g, k, args.include_constants)
        out['closed_form_equal'] = all(closed.per_degree[d] == space.per_degree[d] for d in space.per_degree)
    if args.ring:
        ring = g_fields.ring_eg_jet(g, k)
        out['ring'] = {'dim': ring.dim, 'dims_by_degree': dict(ring.per_degree)}
    return out


def cmd_ring(args):
    g = utils.resolve_group(args.group)
    ring = g_fields.ring_eg_jet(g, _k(args))
    return {
        'group': g.spec, 'k': ring.k, 'dim': ring.dim, 'dims_by_degree': dict(ring.per_degree),
        'basis': [format_jet(e) for e in ring.elements()],
    }


def cmd_tangent(args, notes):
    k = _k(args)
    f = load_germ(args.germ, k, args.exact_germ, notes)
    g = utils.resolve_group(args.group)
    rep = ts.tangent(f, g, args.eq, k, args.extended)
    out = rep.to_payload()
    out['notes'] = out['notes'] + notes
    return out


def cmd_moduli(args, notes):
    k = _k(args)
    f = load_germ(args.germ, k, args.exact_germ, notes)
    g = utils.resolve_group(args.group)
    h = utils.resolve_group(args.subgroup) if args.subgroup else None
    out = ts.moduli(f, args.pair, k, g, h).to_payload()
    out['notes'] = out['notes'] + notes
    return out


def cmd_rigidity(args, notes):
    k = _k(args)
    g = utils.resolve_group(args.group)
    if args.germ:
        germs = [(spec, load_germ(spec, k, args.exact_germ, notes)) for spec in args.germ]
    else:
        germs = []
        for fx in data.load_fixtures(p=g.p):
            if fx.germ.order >= k:
                germs.append((fx.name, dataclasses.replace(fx.germ, order=k).to_germ()))
    out = ts.rigidity_report(g, k, germs).to_payload()
    out['notes'] = notes
    return out


def cmd_growth(args, notes):
    f = load_germ(args.germ, args.k_max, args.exact_germ, notes)
    g = utils.resolve_group(args.group)
    out = ts.growth_probe(f, g, args.eq, args.k_max, args.extended, k_min=args.k_min).to_payload()
    out['notes'] = out['notes'] + notes
    return out


def cmd_normal_form(args, notes):
    f = load_germ(args.germ, args.jet_order, args.exact_germ, notes)
    if args.kind == 'ak':
        out = cg.ak_normalize(f, tol=_tol(args, config.DEFAULT_TOL)).to_payload()
    else:
        out = cg.monge_normal_form(f, tol=_tol(args, config.MONGE_TOL)).to_payload()
        notes.append("principal curvatures are 2*lambda for the graph lambda1*x1^2 + lambda2*x2^2")
    out['notes'] = out.get('notes', []) + notes
    return out


def cmd_invariants(args, notes):
    f = load_germ(args.germ, args.jet_order, args.exact_germ, notes)
    tol = _tol(args, config.DEFAULT_TOL)
    if args.kind == 'curvature':
        out = cg.curvature_invariants(f, tol).to_payload()
    elif args.kind == 'equiaffine':
        out = cg.equiaffine_invariants(f, tol).to_payload()
    else:
        form = cg.ak_normalize(f, tol=tol)
        out = cg.frontal_invariants(form.k, form.sign, form.h, tol).to_payload()
        out['normal_form'] = form.to_payload()
        notes.append("ell is the frame derivative; ell_literature differs from it by the factor -1/sqrt(s)")
    out['notes'] = notes
    return out


def cmd_congruent(args, notes):
    f = load_germ(args.germ_a, args.jet_order, args.exact_germ, notes)
    g = load_germ(args.germ_b, args.jet_order, args.exact_germ, notes)
    out = cg.congruence_test(f, g, args.mode, tol=_tol(args, config.AMPLIFIED_TOL)).to_payload()
    out['notes'] = notes
    return out


def cmd_reproduce(args, notes):
    suite = 'all' if args.all or args.suite is None else args.suite
    rep = reproduce(suite, quick=args.quick)
    out = rep.to_payload()
    out['notes'] = out['notes'] + notes
    return out


COMMANDS = {
    'gfields': lambda args, notes: cmd_gfields(args),
    'ring': lambda args, notes: cmd_ring(args),
    'tangent': cmd_tangent,
    'moduli': cmd_moduli,
    'rigidity': cmd_rigidity,
    'growth': cmd_growth,
    'normal-form': cmd_normal_form,
    'invariants': cmd_invariants,
    'congruent': cmd_congruent,
    'reproduce': cmd_reproduce,
}


def configure_logging(args):
    level = logging.INFO
    if getattr(args, 'verbose', False):
        level = logging.DEBUG
    elif getattr(args, 'quiet', False):
        level = logging.ERROR
    logging.addLevelName(logging.WARNING, "WARN")
    logging.basicConfig(level=level, format="[%(levelname)s] %(message)s", stream=sys.stderr, force=True)


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UserInputError as e:
        logging.basicConfig(format="[%(levelname)s] %(message)s", stream=sys.stderr, force=True)
        log.error(str(e))
        return 1
    except SystemExit as e:
        return e.code or 0
    configure_logging(args)

    try:
        payload = COMMANDS[args.command](args, [])
        report.emit(payload, args.format, title=args.command)
    except InvariantViolation as e:
        log.error(f"invariant violated: {e}")
        return 2
    except UserInputError as e:
        log.error(str(e))
        return 1
    except GermlabError as e:
        log.error(str(e))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
