"""
Artifact Evaluation Module

Scores computed artifacts against what the theory says they must show:
operator spectra against the expected inertia, stability curves against the
decreasing ratio E_L/M_L^2, and period scans against the known shape of the
period function. Each evaluation lists its checks, a 0-100 score and
recommendations for rerunning with better settings.
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from utils.memory import json_default
from waves.functionals import StabilityCurve
from waves.spectra import BAND_OCCUPANCY
from waves.wave_family import a_shape

KERNEL_TOL = 1e-6


def _score(checks: Dict[str, bool]) -> float:
    if not checks:
        return 0.0
    return round(100.0 * sum(bool(v) for v in checks.values()) / len(checks), 2)


def _monotone(values: np.ndarray, sign: int) -> bool:
    steps = np.diff(values)
    return bool(steps.size and np.all(sign * steps > 0))


class ArtifactEvaluator:
    """
    Evaluates the quality of spectrum reports, stability curves and period scans.

    Every evaluate_* method returns a dict with 'timestamp', 'artifact',
    'checks' (name -> bool), 'metrics', 'overall_score' (0-100) and
    'recommendations', and appends it to evaluation_history.

    Example:
        >>> evaluator = ArtifactEvaluator()
        >>> result = evaluator.evaluate_stability_curve(curve, n_requested=40)
        >>> print(f"Score: {result['overall_score']}/100")
    """

    def __init__(self):
        """Initialize the artifact evaluator."""
        self.evaluation_history: List[Dict] = []

    def _record(self, artifact: str, checks: dict, metrics: dict,
                recommendations: list) -> Dict[str, Any]:
        evaluation = {
            'timestamp': datetime.now().isoformat(),
            'artifact': artifact,
            'checks': {k: bool(v) for k, v in checks.items()},
            'metrics': metrics,
            'overall_score': _score(checks),
            'recommendations': recommendations,
        }
        self.evaluation_history.append(evaluation)
        return evaluation

    def evaluate_spectrum_report(self, summaries: Dict[str, dict]) -> Dict[str, Any]:
        """
        Evaluate the operator spectra of one interior wave.

        Checks, where the corresponding summary is present:
        - K_op has exactly one negative and one zero eigenvalue
        - K_op fills its continuous band to BAND_OCCUPANCY
        - L_op has a nonempty kernel
        - kernel residuals of L_op and K_op below KERNEL_TOL
        - JL_op reports spectral stability

        Args:
            summaries (dict): Operator kind -> SpectralReport.summary()

        Returns:
            dict: Evaluation results with checks, metrics and recommendations
        """
        checks, metrics, recommendations = {}, {}, []
        k_op = summaries.get('K_op')
        if k_op is not None:
            checks['k_op_one_negative'] = k_op['n_negative'] == 1
            checks['k_op_one_zero'] = k_op['n_zero'] == 1
            checks['k_op_band_filled'] = (k_op.get('band_fraction') or 0.0) >= BAND_OCCUPANCY
            metrics['k_op_band_fraction'] = k_op.get('band_fraction')
        l_op = summaries.get('L_op')
        if l_op is not None:
            checks['l_op_kernel_present'] = l_op['n_zero'] >= 1
            metrics['l_op_n_negative'] = l_op['n_negative']
        for kind in ('L_op', 'K_op'):
            summary = summaries.get(kind)
            if summary is not None and np.isfinite(summary.get('kernel_residual', np.nan)):
                checks[f'{kind.lower()}_kernel_residual'] = summary['kernel_residual'] < KERNEL_TOL
                metrics[f'{kind.lower()}_kernel_residual'] = summary['kernel_residual']
        jl = summaries.get('JL_op')
        if jl is not None and 'stable' in jl:
            checks['jl_op_stable'] = jl['stable']
            metrics['jl_op_max_real_part'] = jl.get('max_real_part')

        if not checks.get('k_op_band_filled', True) or not all(
                checks.get(f'{k}_kernel_residual', True) for k in ('l_op', 'k_op')):
            recommendations.append('Increase --N to resolve the profile and the band')
        if not checks.get('k_op_one_negative', True) or not checks.get('k_op_one_zero', True):
            recommendations.append('K_op inertia differs from (1 negative, 1 zero); '
                                   'check --tol or move away from the region boundary')
        if not checks.get('jl_op_stable', True):
            recommendations.append('Unstable flow spectrum; rerun with larger --N before trusting it')
        return self._record('spectrum', checks, metrics, recommendations)

    def evaluate_stability_curve(self, curve: StabilityCurve,
                                 n_requested: int = None) -> Dict[str, Any]:
        """
        Evaluate one fixed-period stability curve.

        Args:
            curve (StabilityCurve): Output of stability_scan
            n_requested (int, optional): Number of samples asked for

        Returns:
            dict: Evaluation results; metrics include the share of samples with
            det P < 0 and the worst slope-to-error ratio

        Example:
            >>> result = evaluator.evaluate_stability_curve(curve, 40)
            >>> result['checks']['ratio_decreasing']
            True
        """
        n = len(curve.samples)
        checks = {'has_samples': n > 1}
        metrics = {'L': curve.L, 'c': curve.c, 'n_samples': n, 'verdict': curve.verdict}
        recommendations = []
        if n_requested:
            checks['all_samples_computed'] = n == n_requested
        if n > 1:
            ratio = curve.column('ratio')
            slopes = curve.column('dratio_da')
            errors = curve.column('dratio_err')
            checks['ratio_decreasing'] = _monotone(ratio, -1)
            checks['slopes_negative'] = bool(np.all(slopes < 0))
            metrics['det_p_negative_fraction'] = float(np.mean(curve.column('det_p') < 0))
            metrics['min_slope_to_error'] = float(np.min(np.abs(slopes) / np.maximum(errors, 1e-300)))
        checks['verdict_stable'] = curve.verdict == 'Stable'

        if not checks.get('all_samples_computed', True):
            recommendations.append('Some samples failed; try --spacing log or a smaller --n')
        if curve.verdict == 'Inconclusive':
            recommendations.append('Derivative errors too large; increase sampling density with --n')
        if n <= 1:
            recommendations.append('Increase --n')
        return self._record('stability_curve', checks, metrics, recommendations)

    def evaluate_period_scan(self, x: np.ndarray, periods: np.ndarray, mode: str,
                             c: float, fixed: float) -> Dict[str, Any]:
        """
        Evaluate a period scan along one slice.

        Args:
            x (array): Scan variable (a for 'vs_a', b for 'vs_b')
            periods (array): Period at each x
            mode (str): 'vs_a' or 'vs_b'
            c (float): Wave speed
            fixed (float): The value held fixed (b for 'vs_a', a for 'vs_b')

        Returns:
            dict: Evaluation results; the shape check follows a_shape for
            'vs_a' and expects increasing periods for 'vs_b'
        """
        periods = np.asarray(periods, dtype=float)
        checks = {'all_finite': bool(np.all(np.isfinite(periods))),
                  'all_positive': bool(np.all(periods > 0))}
        metrics = {'mode': mode, 'n_samples': int(periods.size)}
        recommendations = []
        if mode == 'vs_b':
            expected = 'increasing'
        else:
            expected = a_shape(fixed, c)
        metrics['expected_shape'] = expected
        if expected == 'increasing':
            checks['shape'] = _monotone(periods, 1)
        elif expected == 'decreasing':
            checks['shape'] = _monotone(periods, -1)
        else:
            peak = int(np.argmax(periods))
            checks['shape'] = (0 < peak < periods.size - 1
                               and _monotone(periods[:peak + 1], 1)
                               and _monotone(periods[peak:], -1))
            metrics['peak_x'] = float(np.asarray(x)[peak])
        if not checks['shape']:
            recommendations.append(f'Period scan is not {expected}; increase --n or check --tol')
        return self._record('period_scan', checks, metrics, recommendations)

    def get_evaluation_summary(self) -> Dict[str, Any]:
        """
        Summary of all evaluations.

        Returns:
            dict: total, average, highest and lowest scores plus the evaluations
        """
        if not self.evaluation_history:
            return {'message': 'No evaluations yet'}
        scores = [e['overall_score'] for e in self.evaluation_history]
        return {
            'total_evaluations': len(self.evaluation_history),
            'average_score': round(sum(scores) / len(scores), 2),
            'highest_score': max(scores),
            'lowest_score': min(scores),
            'evaluations': self.evaluation_history,
        }

    def save_evaluation(self, filepath) -> Path:
        """Save the evaluation summary to JSON at filepath."""
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(self.get_evaluation_summary(), f, indent=2, default=json_default)
        return filepath

