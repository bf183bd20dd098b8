import argparse
import logging
import math
import os
import sys
from typing import Callable, Dict, List, Optional

#add project root to path
project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.append(project_root)

from assembly.manifold import AssemblyError, assemble, seam_flip_composition
from block_flow.integrator import integrate_orbit
from block_flow.model_block import HALF_PI, BlockPoint, exit_shear, transit_time
from blueprint.conditions import euler_characteristic, prong_census, validate_conditions
from blueprint.fat_graph import FatGraphBlueprint, trace_boundary_cycles
from blueprint.parser import parse_blueprint
from blueprint.validation import ValidationReport
from closure.classification import classify_flow
from closure.gluing import GluingSpec, parse_gluing, validate_gluing
from config import (CURVE_CLIP, EXPANSION_TARGET, JACOBIAN_SAMPLES, LAMBDA_BRACKET, LAMBDA_REL_TOL, SEAM_TOL,
                    WALL_CUTOFF, Config, validate_config)
from lozenge.fat_tree import build_fat_tree, export_fat_tree
from lozenge.skew_model import nu, parse_orbit, skew_chain_connected, skew_partner
from nhtree.presentation import PresentationError, parse_automorphism, parse_presentation
from nhtree.queries import AxisPreconditionError, axis, block, components_minus_point, fix_sets
from reporting.run_report import ReportLevel, RunReport, write_csv
from returnmap.cones import estimate_lambda0, jacobian_spot_check, verify_cones
from returnmap.return_system import ReturnMapError, ReturnMapSystem
from returnmap.stable_curves import density_probe, stable_curves

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    #stdout carries the report, so logging goes to stderr
    if quiet:
        level = logging.WARNING
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr
    )


def create_run_config(args) -> Config:
    #from command line arguments
    config = Config()
    config.lam = args.lam
    config.kappa = args.kappa
    config.grid = args.grid
    config.generations = args.gen
    config.radius = args.radius
    config.window = args.window
    config.seed = args.seed
    config.out_dir = args.out
    config.structured = args.json
    config.verbose_logging = args.verbose
    return config


def _read(path: str) -> str:
    with open(path, 'r') as handle:
        return handle.read()


def _out_path(config: Config, name: str) -> Optional[str]:
    if not config.out_dir:
        return None
    os.makedirs(config.out_dir, exist_ok=True)
    return os.path.join(config.out_dir, name)


def _itemize(report: RunReport, validation: ValidationReport) -> None:
    for violation in validation.violations:
        subject = f" [{violation.subject}]" if violation.subject else ""
        report.add('violation', f"{violation.code}: {violation.message}{subject}")


def _load_blueprint(args, report: RunReport) -> FatGraphBlueprint:
    text = _read(args.blueprint)
    report.add_digest('blueprint', text)
    return parse_blueprint(text)


def _load_gluing(args, report: RunReport) -> GluingSpec:
    text = _read(args.gluing)
    report.add_digest('gluing', text)
    return parse_gluing(text)


def _system(args, config: Config, report: RunReport) -> Optional[ReturnMapSystem]:
    bp = _load_blueprint(args, report)
    spec = _load_gluing(args, report)
    asm = assemble(bp)
    validation = validate_gluing(asm, spec)
    if not validation.passed:
        _itemize(report, validation)
        report.add('status', 'fail')
        return None
    sys_ = ReturnMapSystem(asm, spec, config.lam, config.kappa)
    if getattr(args, 'reverse', False):
        sys_ = sys_.reversed()
    report.add('system', 'reversed' if sys_.reverse else 'forward')
    report.add('kappa_max', sys_.kappa_max())
    return sys_


def cmd_validate(args, config: Config, report: RunReport) -> int:
    bp = _load_blueprint(args, report)
    cycles = trace_boundary_cycles(bp)
    validation = validate_conditions(bp, cycles=cycles)
    euler = euler_characteristic(bp, cycles)
    report.add('vertices', euler.vertices)
    report.add('edges', euler.edges)
    report.add('boundary_cycles', euler.boundary_cycles)
    for cycle in cycles:
        report.add(f"cycle.{cycle.index}", cycle.describe())
    report.add('bipartite', validation.details['bipartite'])
    report.add('polarity_source', validation.details['polarity_source'])
    if 'polarity' in validation.details:
        report.add('polarity', validation.details['polarity'])
    report.add('chi_surface', euler.chi_surface)
    report.add('chi_closed', euler.chi_closed)
    report.add('orientable_surface', euler.orientable)
    if not validation.has('condition_I'):
        report.add('prongs', {c.vertex: c.p for c in prong_census(bp)})
    _itemize(report, validation)
    report.add('status', 'pass' if validation.passed else 'fail')
    return EXIT_OK if validation.passed else EXIT_FAILED


def cmd_assemble(args, config: Config, report: RunReport) -> int:
    bp = _load_blueprint(args, report)
    try:
        asm = assemble(bp)
    except AssemblyError as e:
        if e.report is not None:
            _itemize(report, e.report)
        else:
            report.add('violation', str(e))
        report.add('status', 'fail')
        return EXIT_FAILED
    for i, line in enumerate(asm.report_lines()):
        report.add(f"line.{i}", line)
    report.add('half_walls', asm.half_wall_census())
    for component in asm.components.values():
        try:
            height = seam_flip_composition(asm, component.index, 0.25)
        except AssemblyError as e:
            report.add('violation', str(e))
            report.add('status', 'fail')
            return EXIT_FAILED
        report.add(f"seam_flip.{component.index}", 'identity' if abs(height - 0.25) <= SEAM_TOL else 'flip')
    report.add('tori', sum(c.is_torus for c in asm.components.values()))
    report.add('status', 'pass')
    return EXIT_OK


def cmd_classify(args, config: Config, report: RunReport) -> int:
    bp = _load_blueprint(args, report)
    spec = _load_gluing(args, report)
    asm = assemble(bp)
    validation = validate_gluing(asm, spec)
    if not validation.passed:
        _itemize(report, validation)
        report.add('status', 'fail')
        return EXIT_FAILED
    flow = classify_flow(bp, spec)
    report.add('classification', flow.summary())
    report.add('kind', flow.kind)
    for vertex, p in flow.singular_orbits:
        report.add(f"orbit.{vertex}", p)
    for record in spec.surgeries:
        report.add(f"surgery.{record.vertex}", f"{record.p},{record.q}")
    report.add('status', 'pass')
    return EXIT_OK


def cmd_cones(args, config: Config, report: RunReport) -> int:
    sys_ = _system(args, config, report)
    if sys_ is None:
        return EXIT_FAILED
    path = _out_path(config, 'cones.csv')
    cones = verify_cones(sys_, config.grid, config.collar, keep_rows=path is not None)
    for key, value in cones.summary().items():
        report.add(f"cones.{key}", value)
    report.add('cones.expansion_target', EXPANSION_TARGET)
    report.add('seed', config.seed)
    try:
        report.add('jacobian.max_gap', jacobian_spot_check(sys_, JACOBIAN_SAMPLES, config.seed))
    except ReturnMapError as e:
        report.add('jacobian.skipped', str(e))
    if path:
        write_csv(path, ['u', 'v', 'margin', 'expansion'], cones.rows.tolist())
        report.add_output(path)
    report.add('status', 'pass' if cones.passed else 'fail')
    return EXIT_OK if cones.passed else EXIT_FAILED


def cmd_lambda0(args, config: Config, report: RunReport) -> int:
    sys_ = _system(args, config, report)
    if sys_ is None:
        return EXIT_FAILED
    report.add('grid', config.grid)
    report.add('bracket', list(LAMBDA_BRACKET))
    report.add('rel_tol', LAMBDA_REL_TOL)
    try:
        lam0 = estimate_lambda0(sys_, grid=config.grid)
    except ReturnMapError as e:
        report.add('lambda0', 'not certifiable at this grid')
        report.add('reason', str(e))
        report.add('status', 'fail')
        return EXIT_FAILED
    report.add('lambda0', lam0)
    report.add('status', 'pass')
    return EXIT_OK


def cmd_curves(args, config: Config, report: RunReport) -> int:
    sys_ = _system(args, config, report)
    if sys_ is None:
        return EXIT_FAILED
    try:
        families = stable_curves(sys_, config.generations, config.curve_resolution)
    except ReturnMapError as e:
        report.add('reason', str(e))
        report.add('status', 'fail')
        return EXIT_FAILED
    density = density_probe(sys_, families, config.density_box)
    ok = True
    report.add('resolution', config.curve_resolution)
    report.add('clip', CURVE_CLIP)
    for family, fraction in zip(families, density.fractions):
        outside = family.outside_cone(sys_.kappa)
        ok = ok and outside
        report.add(f"generation.{family.generation}", {
            'curves': len(family.curves), 'max_slope': family.max_slope,
            'outside_cone': outside, 'density': fraction,
        })
        report.add(f"generation.{family.generation}.annuli",
                   {f"{c}.{j}": n for (c, j), n in sorted(family.counts_per_annulus().items())},
                   level=ReportLevel.VERBOSE)
    report.add('density_box', density.box)
    path = _out_path(config, 'curves.csv')
    if path:
        rows = (row for family in families for row in family.rows())
        write_csv(path, ['generation', 'component', 'curve_id', 'u', 'v'], rows)
        report.add_output(path)
    report.add('status', 'pass' if ok else 'fail')
    return EXIT_OK if ok else EXIT_FAILED


def cmd_orbit(args, config: Config, report: RunReport) -> int:
    try:
        x, y, z = (float(part) for part in args.point.split(','))
    except ValueError as e:
        raise ValueError(f"cannot read point '{args.point}': expected x,y,z") from e
    start = BlockPoint(x, y, z)
    trajectory = integrate_orbit(start, config.lam, config.rk4_step, config.time_budget)
    report.add('lambda', config.lam)
    report.add('rk4_step', config.rk4_step)
    report.add('exited', trajectory.exited)
    if trajectory.exited:
        report.add('exit_time', trajectory.exit_time)
        report.add('exit_point', list(trajectory.exit_point))
        if z == -HALF_PI and abs(x) < HALF_PI - WALL_CUTOFF:
            report.add('closed_form.transit_time', float(transit_time(x)))
            report.add('closed_form.exit_y', float((y + exit_shear(x, config.lam)) % 1.0))
    path = _out_path(config, 'trajectory.csv')
    if path:
        write_csv(path, ['t', 'x', 'y', 'z'], trajectory.rows())
        report.add_output(path)
    report.add('status', 'pass')
    return EXIT_OK


def cmd_fattree(args, config: Config, report: RunReport) -> int:
    bp = _load_blueprint(args, report)
    patch = build_fat_tree(bp, config.radius)
    report.add('radius', config.radius)
    report.add('vertices', len(patch.vertices))
    report.add('edges', len(patch.edges))
    report.add('is_tree', patch.is_tree())
    report.add('labels', {v: ''.join(row) for v, row in sorted(patch.labels.items())})
    path = _out_path(config, 'fat_tree.csv')
    if path:
        with open(path, 'w') as handle:
            handle.write(export_fat_tree(patch))
        report.add_output(path)
    report.add('status', 'pass' if patch.is_tree() else 'fail')
    return EXIT_OK if patch.is_tree() else EXIT_FAILED


def cmd_skew(args, config: Config, report: RunReport) -> int:
    first, second = parse_orbit(args.first), parse_orbit(args.second)
    connection = skew_chain_connected(first, second)
    report.add('first', str(first))
    report.add('second', str(second))
    report.add('nu.first', [str(v) for v in nu(first)])
    report.add('nu.second', [str(v) for v in nu(second)])
    report.add('partner.first', str(skew_partner(first)))
    report.add('connection', connection.kind)
    report.add('length', connection.length if connection.length is not None else 'none')
    report.add('status', 'pass')
    return EXIT_OK


def cmd_nhtree(args, config: Config, report: RunReport) -> int:
    text = _read(args.presentation)
    report.add_digest('presentation', text)
    try:
        tree = parse_presentation(text, window=config.window)
    except PresentationError as e:
        report.add('valid', False)
        report.add('violation', str(e))
        report.add('status', 'fail')
        return EXIT_FAILED
    report.add('valid', True)
    report.add('window', tree.window if tree.window is not None else 'none')
    report.add('points', len(tree.points))
    report.add('segments', len(tree.segments))
    report.add('witnesses', len(tree.witnesses))
    if args.at:
        parts = components_minus_point(tree, args.at)
        report.add(f"prongs.{args.at}", len(parts))
    if args.block:
        a, _, b = args.block.partition(',')
        result = block(tree, a, b)
        report.add('block', [list(c) for c in result.components])
        report.add('block.distance', result.distance)

    gamma = parse_automorphism(_read(args.automorphism), tree) if args.automorphism else tree.shift
    ok = True
    if gamma is not None:
        fixes = fix_sets(tree, gamma)
        report.add('fix', sorted(fixes.fixed))
        report.add('fix_tilde', sorted(fixes.fixed_tilde))
        try:
            result = axis(tree, gamma)
        except AxisPreconditionError as e:
            report.add('axis', f"undefined: {e}")
        else:
            report.add('axis.points', sorted(result.points))
            report.add('axis.edges', sorted('-'.join(k) for k in result.edges))
            report.add('axis.inconclusive', result.inconclusive)
            report.add('axis.checks', result.checks)
            ok = result.passed
    report.add('status', 'pass' if ok else 'fail')
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS: Dict[str, Callable] = {
    'validate': cmd_validate,
    'assemble': cmd_assemble,
    'classify': cmd_classify,
    'cones': cmd_cones,
    'lambda0': cmd_lambda0,
    'curves': cmd_curves,
    'orbit': cmd_orbit,
    'fattree': cmd_fattree,
    'skew': cmd_skew,
    'nhtree': cmd_nhtree,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    defaults = Config()
    common.add_argument('--lambda', dest='lam', type=float, default=defaults.lam,
                        help='Block shear strength')
    common.add_argument('--kappa', type=float, default=defaults.kappa,
                        help='Cone half-slope around the fiber direction')
    common.add_argument('--grid', type=int, default=defaults.grid,
                        help='Grid cells per side of each annulus')
    common.add_argument('--gen', type=int, default=defaults.generations,
                        help='Number of stable curve generations')
    common.add_argument('--radius', type=int, default=defaults.radius,
                        help='Fat tree radius')
    common.add_argument('--window', type=int, default=defaults.window,
                        help='Copies kept on each side when unrolling periodic trees')
    common.add_argument('--seed', type=int, default=defaults.seed,
                        help='Random seed')
    common.add_argument('--out', type=str, default=None,
                        help='Directory for CSV outputs')
    common.add_argument('--json', action='store_true',
                        help='Write the report as one JSON object')
    common.add_argument('--report-file', default=None,
                        help='Also write the report to this file')
    common.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose logging')
    common.add_argument('--quiet', '-q', action='store_true',
                        help='Only log warnings and errors')

    parser = argparse.ArgumentParser(description='Pseudo-Anosov flow construction toolkit')
    sub = parser.add_subparsers(dest='command', required=True)
    p = sub.add_parser('validate', parents=[common], help='Check blueprint conditions')
    p.add_argument('blueprint')
    p = sub.add_parser('assemble', parents=[common], help='Assemble blocks along a blueprint')
    p.add_argument('blueprint')
    for name, text in (('classify', 'Classify the closed flow'), ('cones', 'Verify the cone field'),
                       ('lambda0', 'Estimate the smallest certifiable lambda'),
                       ('curves', 'Pull back stable curves')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('blueprint')
        p.add_argument('gluing')
        if name == 'cones':
            p.add_argument('--reverse', action='store_true', help='Use the time-reversed system')
    p = sub.add_parser('orbit', parents=[common], help='Integrate one orbit through the model block')
    p.add_argument('--point', required=True, help='Start point x,y,z')
    p = sub.add_parser('fattree', parents=[common], help='Unfold the fat tree of lozenges')
    p.add_argument('blueprint')
    p = sub.add_parser('skew', parents=[common], help='Chain connectivity in the skewed orbit space')
    p.add_argument('first', help='Orbit d,c')
    p.add_argument('second', help='Orbit d,c')
    p = sub.add_parser('nhtree', parents=[common], help='Query a non-Hausdorff tree presentation')
    p.add_argument('presentation')
    p.add_argument('--automorphism', default=None, help='File with map lines')
    p.add_argument('--at', default=None, help='Point whose prongs are counted')
    p.add_argument('--block', default=None, help='Pair x,y for the block decomposition')
    return parser


def _execute(args, report: RunReport) -> int:
    try:
        config = create_run_config(args)
        validate_config(config)
        return COMMANDS[args.command](args, config, report)
    except (OSError, ValueError) as e:
        logger.error(f"{args.command} failed on its input: {e}")
        report.add('error', str(e))
        report.add('status', 'error')
        return EXIT_INPUT
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        report.add('error', str(e))
        report.add('status', 'error')
        return EXIT_FAILED


def run(argv: Optional[List[str]] = None, stream=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    setup_logging(args.verbose, args.quiet)
    level = ReportLevel.VERBOSE if args.verbose else ReportLevel.BASIC
    report = RunReport(args.command, level, output_file=args.report_file, structured=args.json)
    try:
        with report:
            status = _execute(args, report)
            report.emit(stream if stream is not None else sys.stdout)
    except OSError as e:
        logger.error(f"Cannot write report file {args.report_file}: {e}")
        return EXIT_INPUT
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
