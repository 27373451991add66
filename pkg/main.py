"""
chwaves - Command-Line Interface

Computes the smooth periodic traveling waves of the Camassa-Holm equation and
writes plot-ready artifacts: the existence region, period scans, stability
curves along fixed-period families, operator spectra and sampled profiles.

Usage:
    python main.py region --c 2 --L pi/2 pi
    python main.py period-scan --mode vs_a --b -1.2 -0.6 0
    python main.py stability --L pi/2 3pi/4 pi 2pi --n 40
    python main.py spectrum --a 0.4 --b 0 --N 256
    python main.py profile --a 0.4 --b 0

Exit codes: 0 success, 1 numerical failure, 2 invalid input.
"""

import argparse
import re
import sys
import warnings
from pathlib import Path

import numpy as np
import pandas as pd

from utils.config import FORMATS, SPACINGS, ScanConfig, default_output_dir
from utils.evaluator import ArtifactEvaluator
from utils.exporter import (eigen_frame, profile_frame, stability_frame,
                            write_json, write_table)
from utils.logging_config import get_logger
from utils.memory import RunLog
from waves.errors import DomainError, InvalidInput, NoSolution, NotInRegion, WaveError
from waves.functionals import conserved, fold_on_curve, stability_scan
from waves.monotonicity import verify_monotonicity
from waves.profile import (a_window, b_window, fixed_period_curve, invariant_residual,
                           period, sample_profile)
from waves.spectra import (KINDS, build_operator, eigen_report, floquet_theta,
                           kernel_residuals, operator_identities, spectral_stability,
                           theta_closed_form, fold_by_theta)
from waves.wave_family import (RegionClass, WaveParams, boundary_curves, classify,
                               shape_threshold)

logger = get_logger(__name__)

_PI_PATTERN = re.compile(r'^\s*([0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$')
DEFAULT_PERIODS = (0.5 * np.pi, np.pi)
DEFAULT_SLICES = {'vs_a': (-1.2, -0.6, 0.0), 'vs_b': (0.3, 0.6, 0.9)}
SCAN_MARGIN = 0.02


def parse_period(text: str) -> float:
    """
    Parse a period value: a float or a multiple of pi such as 'pi', '3pi/4', '2*pi'.

    Example:
        >>> parse_period('3pi/4')
        2.356194490192345
    """
    match = _PI_PATTERN.match(text)
    if match:
        numerator = float(match.group(1)) if match.group(1) else 1.0
        denominator = float(match.group(2)) if match.group(2) else 1.0
        return numerator * np.pi / denominator
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a period value: {text!r}")


def _banner(title: str):
    print('\n' + '=' * 60)
    print(title)
    print('=' * 60)


def _interior_params(config: ScanConfig, a: float, b: float) -> WaveParams:
    p = WaveParams(a, b, config.c)
    region = classify(p, config.tol)
    if region != RegionClass.INTERIOR:
        raise NotInRegion(f"(a, b, c) = ({a}, {b}, {config.c}) is {region.value}, not Interior")
    return p


def _single(values, name: str) -> float:
    if not values or len(values) != 1:
        raise InvalidInput(f"--{name} takes exactly one value for this command")
    return values[0]


def cmd_region(config: ScanConfig, periods: list, log: RunLog,
               evaluator: ArtifactEvaluator) -> Path:
    """
    Existence region: boundary curves, the peaked segment, the fold locus
    d_a L = 0 located per slice of fixed b by the sign change of theta, and
    fixed-period curves with their crossing of the fold locus.

    Returns:
        Path: The region summary JSON.
    """
    c, out = config.c, Path(config.output_dir)
    print(f'\n🗺️  Existence region for c = {c:g}')
    curves = boundary_curves(c, config.n_samples)
    boundaries = pd.DataFrame({'a': curves['a'], 'b_minus': curves['b_minus'],
                               'b_plus': curves['b_plus']})
    log.add_artifact(write_table(boundaries, out / 'region_boundaries', config.fmt))
    peaked = pd.DataFrame({'a': 0.0, 'b': curves['peaked_b']})
    log.add_artifact(write_table(peaked, out / 'region_peaked', config.fmt))

    print('🔎 Locating the fold locus slice by slice...')
    n_slices = max(4, config.n_samples // 4)
    lo, hi = shape_threshold(c), 0.0
    slices = lo + (hi - lo) * (np.arange(1, n_slices + 1) / (n_slices + 1))
    locus = []
    for b in slices:
        a = fold_by_theta(float(b), c)
        log.add_message('system', 'fold slice', metadata={'b': float(b), 'a': a})
        if np.isfinite(a):
            locus.append({'a': a, 'b': float(b)})
    log.add_artifact(write_table(pd.DataFrame(locus, columns=['a', 'b']),
                                 out / 'region_fold_locus', config.fmt))

    rows, crossings = [], {}
    for L in periods:
        print(f'   - fixed-period curve L = {L:.6g}')
        for q in fixed_period_curve(L, c, config.n_samples, config.spacing):
            rows.append({'period': L, 'a': q.a, 'b': q.b})
        try:
            crossings[f'{L:.12g}'] = fold_on_curve(L, c)
        except NoSolution:
            crossings[f'{L:.12g}'] = None
    log.add_artifact(write_table(pd.DataFrame(rows, columns=['period', 'a', 'b']),
                                 out / 'region_fixed_period', config.fmt))

    summary = {
        'command': 'region',
        'config': config.to_dict(),
        'corner': {'a': curves['corner'][0], 'b': curves['corner'][1]},
        'peaked_segment': {'b_min': -0.5 * c * c, 'b_max': 0.0},
        'fold_points': len(locus),
        'fold_crossings': crossings,
        'evaluation': evaluator.get_evaluation_summary(),
    }
    for L, a in crossings.items():
        status = f'crosses the fold locus at a = {a:.6g}' if a is not None else 'does not cross the fold locus'
        print(f'   - L = {L}: {status}')
    log.store_result('fold_crossings', crossings)
    return write_json(summary, out / 'region_summary.json')


def cmd_period_scan(config: ScanConfig, mode: str, fixed_values: list, log: RunLog,
                    evaluator: ArtifactEvaluator) -> Path:
    """
    Period along slices: a -> L(a, b, c) for each fixed b ('vs_a') or
    b -> L(a, b, c) for each fixed a ('vs_b').

    Returns:
        Path: The scan table.
    """
    c = config.c
    fractions = np.linspace(SCAN_MARGIN, 1.0 - SCAN_MARGIN, config.n_samples)
    rows = []
    for fixed in fixed_values:
        print(f'📈 Scanning {mode} at {"b" if mode == "vs_a" else "a"} = {fixed:g}')
        if mode == 'vs_a':
            lo, hi = a_window(fixed, c)
            points = [WaveParams(float(a), fixed, c) for a in lo + (hi - lo) * fractions]
            xs = [q.a for q in points]
        else:
            lo, hi = b_window(fixed, c)
            points = [WaveParams(fixed, float(b), c) for b in lo + (hi - lo) * fractions]
            xs = [q.b for q in points]
        periods = [period(q) for q in points]
        rows.extend({'a': q.a, 'b': q.b, 'period': L} for q, L in zip(points, periods))
        result = evaluator.evaluate_period_scan(np.array(xs), np.array(periods), mode, c, fixed)
        log.add_message('system', f'scan {mode} at {fixed:g}',
                        metadata={'score': result['overall_score']})
        shape = 'as expected' if result['checks']['shape'] else 'UNEXPECTED'
        print(f'   - shape {result["metrics"]["expected_shape"]}: {shape}')
    out = Path(config.output_dir)
    path = write_table(pd.DataFrame(rows, columns=['a', 'b', 'period']),
                       out / f'period_scan_{mode}', config.fmt)
    log.add_artifact(path)
    log.add_artifact(write_json({'command': 'period-scan', 'mode': mode,
                                 'config': config.to_dict(),
                                 'evaluation': evaluator.get_evaluation_summary()},
                                out / f'period_scan_{mode}_summary.json'))
    return path


def cmd_stability(config: ScanConfig, periods: list, log: RunLog,
                  evaluator: ArtifactEvaluator) -> Path:
    """
    Stability curves E_L/M_L^2 along the fixed-period family for each L,
    with verdicts and the signs of det P.

    Raises:
        InvalidInput: If no period is given.
    """
    if not periods:
        raise InvalidInput('stability needs at least one period: --L L1 [L2 ...]')
    c, out = config.c, Path(config.output_dir)
    frames, verdicts = [], []
    for L in periods:
        print(f'\n⚖️  Stability along L = {L:.6g}')
        curve = stability_scan(L, c, config.n_samples, config.spacing)
        frames.append(stability_frame(curve))
        result = evaluator.evaluate_stability_curve(curve, config.n_samples)
        det_p = curve.column('det_p') if curve.samples else np.array([])
        verdicts.append({
            'period': L,
            'verdict': curve.verdict,
            'n_samples': len(curve.samples),
            'skipped': curve.skipped,
            'det_p_signs': np.sign(det_p).astype(int).tolist(),
            'score': result['overall_score'],
        })
        log.store_result(f'verdict_{L:.12g}', curve.verdict)
        print(f'   - verdict: {curve.verdict} ({len(curve.samples)} samples, '
              f'score {result["overall_score"]}/100)')
    frame = pd.concat(frames, ignore_index=True)
    path = write_table(frame, out / 'stability', config.fmt)
    log.add_artifact(path)
    log.add_artifact(write_json({'command': 'stability', 'config': config.to_dict(),
                                 'curves': verdicts,
                                 'evaluation': evaluator.get_evaluation_summary()},
                                out / 'stability_summary.json'))
    return path


def cmd_spectrum(config: ScanConfig, a: float, b: float, log: RunLog,
                 evaluator: ArtifactEvaluator) -> Path:
    """
    Eigenvalues of every operator kind for one interior wave, plus the
    summary JSON with counts, kernel residuals, operator identities, the
    Floquet constant and the stability verdict.

    Raises:
        NotInRegion: If (a, b, c) is not Interior.
    """
    p = _interior_params(config, a, b)
    out = Path(config.output_dir)
    print(f'\n🎼 Spectra at (a, b, c) = ({a:g}, {b:g}, {config.c:g}), N = {config.N}')
    profile = sample_profile(p, config.N)
    log.increment('profiles_sampled')
    r_l, r_k = kernel_residuals(profile)

    summaries = {}
    for kind in KINDS:
        if kind == 'JL_op':
            report = spectral_stability(profile, config.N, config.zero_tol)
        else:
            report = eigen_report(build_operator(profile, kind), config.zero_tol)
        if kind == 'L_op':
            report.kernel_residual = r_l
        elif kind == 'K_op':
            report.kernel_residual = r_k
        summaries[kind] = report.summary()
        log.add_artifact(write_table(eigen_frame(report), out / f'spectrum_{kind}', config.fmt))
        print(f'   - {kind}: negative {report.n_negative}, zero {report.n_zero}')

    result = evaluator.evaluate_spectrum_report(summaries)
    theta = floquet_theta(p)
    summary = {
        'command': 'spectrum',
        'params': p.to_dict(),
        'config': config.to_dict(),
        'period': period(p),
        'reports': summaries,
        'operator_identities': operator_identities(profile),
        'theta_in_a': theta,
        'theta_in_a_closed_form': theta_closed_form(p),
        'stable': summaries['JL_op'].get('stable'),
        'evaluation': evaluator.get_evaluation_summary(),
    }
    print(f'   - spectrally stable: {summary["stable"]}, score {result["overall_score"]}/100')
    log.store_result('spectrum_score', result['overall_score'])
    return write_json(summary, out / 'spectrum_summary.json')


def cmd_profile(config: ScanConfig, a: float, b: float, log: RunLog,
                evaluator: ArtifactEvaluator) -> Path:
    """One period of the wave (interior or a boundary limit) as x, phi, dphi, ddphi."""
    p = WaveParams(a, b, config.c)
    region = classify(p, config.tol)
    if region == RegionClass.OUTSIDE:
        raise NotInRegion(f"(a, b, c) = ({a}, {b}, {config.c}) is outside the existence region")
    out = Path(config.output_dir)
    print(f'\n🌊 Profile at (a, b, c) = ({a:g}, {b:g}, {config.c:g}): {region.value}')
    profile = sample_profile(p, config.n_points)
    log.increment('profiles_sampled')
    path = write_table(profile_frame(profile), out / 'profile', config.fmt)
    log.add_artifact(path)
    summary = {
        'command': 'profile',
        'params': p.to_dict(),
        'region': region.value,
        'limit': profile.limit,
        'period': profile.period_L,
        'invariant_residual': invariant_residual(profile),
        'conserved': conserved(profile).to_dict(),
        'evaluation': evaluator.get_evaluation_summary(),
    }
    if region == RegionClass.INTERIOR:
        summary['monotonicity'] = verify_monotonicity(p)
    log.add_artifact(write_json(summary, out / 'profile_summary.json'))
    print(f'   - period {profile.period_L:.12g}, {profile.n_points} points')
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='chwaves', description='Smooth periodic Camassa-Holm waves: periods, spectra, stability.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--c', type=float, default=None, help='wave speed (default from CHWAVES_DEFAULT_C)')
    common.add_argument('--n', type=int, default=40, help='samples per slice or family')
    common.add_argument('--N', type=int, default=256, help='grid size for profiles and spectra')
    common.add_argument('--out', default=None, help='output directory (default from CHWAVES_OUTPUT_DIR)')
    common.add_argument('--format', choices=FORMATS, default='csv', help='table format')
    common.add_argument('--tol', type=float, default=None, help='region-classification tolerance')
    common.add_argument('--zero-tol', type=float, default=None, help='relative zero-eigenvalue threshold')
    common.add_argument('--spacing', choices=SPACINGS, default='uniform', help='sampling of fixed-period families')

    sub = parser.add_subparsers(dest='command', required=True)
    region = sub.add_parser('region', parents=[common], help='existence region and fixed-period curves')
    region.add_argument('--L', type=parse_period, nargs='*', default=list(DEFAULT_PERIODS))
    scan = sub.add_parser('period-scan', parents=[common], help='period along slices')
    scan.add_argument('--mode', choices=('vs_a', 'vs_b'), default='vs_a')
    scan.add_argument('--a', type=float, nargs='+', help='fixed a values (vs_b)')
    scan.add_argument('--b', type=float, nargs='+', help='fixed b values (vs_a)')
    stability = sub.add_parser('stability', parents=[common], help='E_L/M_L^2 along fixed-period families')
    stability.add_argument('--L', type=parse_period, nargs='*', default=None)
    for name, text in (('spectrum', 'operator spectra of one wave'), ('profile', 'sampled wave profile')):
        command = sub.add_parser(name, parents=[common], help=text)
        command.add_argument('--a', type=float, nargs='+', required=True)
        command.add_argument('--b', type=float, nargs='+', required=True)
    return parser


def _config_from_args(args) -> ScanConfig:
    config = ScanConfig(n_samples=args.n, n_points=args.N, N=args.N,
                        fmt=args.format, spacing=args.spacing)
    if args.c is not None:
        config.c = args.c
    if args.out is not None:
        config.output_dir = args.out
    if args.tol is not None:
        config.tol = args.tol
    if args.zero_tol is not None:
        config.zero_tol = args.zero_tol
    return config.validate()


def run(args, log: RunLog, evaluator: ArtifactEvaluator) -> Path:
    config = _config_from_args(args)
    log.store_result('config', config.to_dict())
    if args.command == 'region':
        return cmd_region(config, args.L, log, evaluator)
    if args.command == 'period-scan':
        given = args.b if args.mode == 'vs_a' else args.a
        return cmd_period_scan(config, args.mode, given or list(DEFAULT_SLICES[args.mode]),
                               log, evaluator)
    if args.command == 'stability':
        return cmd_stability(config, args.L, log, evaluator)
    handler = cmd_spectrum if args.command == 'spectrum' else cmd_profile
    return handler(config, _single(args.a, 'a'), _single(args.b, 'b'), log, evaluator)


def main(argv=None) -> int:
    """
    Entry point. Parses argv, runs one command and returns the exit code.

    Example:
        >>> main(['profile', '--a', '0.4', '--b', '0', '--out', 'output'])
        0
    """
    args = build_parser().parse_args(argv)
    log = RunLog(command=args.command)
    log.add_message('user', ' '.join(sys.argv[1:] if argv is None else argv))
    evaluator = ArtifactEvaluator()

    _banner(f'🚀 CHWAVES: {args.command.upper()}')
    print(f'📊 Run ID: {log.run_id}')
    code = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        try:
            path = run(args, log, evaluator)
            _banner('✅ RUN COMPLETE!')
            print(f'\n📄 Main artifact: {path}')
        except (InvalidInput, DomainError) as exc:
            print(f'❌ Invalid input: {exc}', file=sys.stderr)
            log.add_message('error', str(exc), metadata={'exit_code': 2})
            code = 2
        except (WaveError, OSError) as exc:
            print(f'❌ Numerical failure: {exc}', file=sys.stderr)
            logger.error('%s failed: %s', args.command, exc)
            log.add_message('error', str(exc), metadata={'exit_code': 1})
            code = 1
    for warning in caught:
        print(f'⚠️  {warning.message}')
        log.add_message('warning', str(warning.message))

    out = args.out or default_output_dir()
    try:
        if evaluator.evaluation_history:
            log.add_artifact(evaluator.save_evaluation(Path(out) / 'evaluation.json'))
        run_file = log.save_to_file(out)
        stats = log.get_run_stats()
        print(f'\n📊 Run Statistics:')
        print(f'   - Artifacts written: {stats["artifact_count"]}')
        print(f'   - Run log saved: {run_file}')
    except OSError as exc:
        print(f'⚠️  Could not save run log: {exc}', file=sys.stderr)
        code = code or 1
    return code


if __name__ == '__main__':
    sys.exit(main())
