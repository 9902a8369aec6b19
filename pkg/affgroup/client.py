"""AffGroup main class."""
import logging
import math
import typing

import numpy as np

from .codecs import LiftedCodec, PathLike, grid_codec_for
from .models.chart import QuadratureChart
from .models.config import RunConfig
from .models.grid import Grid2
from .models.kernel import SeparableKernel
from .models.lifted import LiftedSignal
from .models.report import AlignmentResult, CalibrationResult, InvarianceReport, StudyResult
from .modules.align import element_from_params, oracle_align
from .modules.bank import lifting_kernel, select_kernels, standard_bank
from .modules.gconv import gconv, project
from .modules.invariance import build_report
from .modules.lifting import lift, lift_margin
from .modules.signal import pad
from .modules.studies import run_study
from .modules.synth import corpus, generate_pair, random_params
from .modules.workers import set_worker_cap


__all__ = ["AffGroup"]


logger = logging.getLogger(__name__)

Params = typing.Tuple[float, float, float, float, float, float]


class AffGroup:
    """AffGroup main class: the lift, convolve, project pipeline and the invariance criteria under one configuration."""

    def __init__(self, config: typing.Optional[RunConfig] = None) -> None:
        self.config = config or RunConfig()
        """Run configuration."""
        self.lifted_codec = LiftedCodec()
        """Codec of lifted signal artifacts."""
        set_worker_cap(self.config.threads)

    @property
    def chart(self) -> QuadratureChart:
        """Group chart the pipeline runs on."""
        return self.config.run_chart.to_chart()

    def read_grid(self, path: PathLike) -> Grid2:
        return grid_codec_for(path).read(path)

    def write_grid(self, grid: Grid2, path: PathLike, *, binary: bool = False) -> None:
        grid_codec_for(path, binary=binary).write(grid, path)

    def read_lifted(self, path: PathLike) -> LiftedSignal:
        return self.lifted_codec.read(path)

    def write_lifted(self, F: LiftedSignal, path: PathLike) -> None:
        self.lifted_codec.write(F, path)

    def kernels(self, spacing: float = 1.0) -> typing.List[SeparableKernel]:
        """Kernels of the standard bank selected by the configuration.

        Raises:
            KeyError: if the configured kernel name is not in the bank.
        """
        bank = standard_bank(self.config.bank, spacing, self.config.kernel_radius)
        return select_kernels(bank, self.config.kernel)

    def lift(self, f: Grid2) -> LiftedSignal:
        """Lift a planar signal onto the run chart with the configured lifting kernel."""
        k = lifting_kernel(self.config, f.spacing)
        return lift(f, k, self.chart, det_epsilon=self.config.tolerances.det_epsilon)

    def gconv(self, F: LiftedSignal) -> LiftedSignal:
        """Group convolution with the configured kernel, or the first kernel of the bank."""
        kern = self.kernels(F.spatial.spacing)[0]
        logger.debug("Convolving with kernel %s.", kern.name)
        return gconv(F, kern, det_epsilon=self.config.tolerances.det_epsilon)

    def project(self, F: LiftedSignal) -> Grid2:
        return project(F, self.config.projection_measure)

    def align(self, f1: Grid2, f2: Grid2) -> AlignmentResult:
        return oracle_align(f1, f2, self.config.search)

    def invariance(self, f1: Grid2, f2: Grid2, *, aligned: typing.Optional[AlignmentResult] = None) -> InvarianceReport:
        """Align f2 onto f1, then run every invariance criterion over the selected kernels.

        Both images are lifted with a zero border of `padding` nodes so that no fiber is cut by
        the window.

        Args:
            f1 (Grid2): First signal.
            f2 (Grid2): Second signal, on the same grid.
            aligned (typing.Optional[AlignmentResult]): Precomputed alignment of f2 onto f1.
        """
        aligned = aligned or self.align(f1, f2)
        logger.info("Aligned with residual %.3e at %s.", aligned.residual_l1, aligned.params)
        k = lifting_kernel(self.config, f1.spacing)
        margin = self.config.padding if self.config.padding is not None else lift_margin(k, self.chart)
        logger.debug("Padding inputs by %d nodes.", margin)
        return build_report(
            pad(f1, margin),
            pad(f2, margin),
            k,
            self.kernels(f1.spacing),
            aligned.g,
            self.chart,
            self.config.tolerances,
        )

    def passes(self, report: InvarianceReport) -> bool:
        """Whether the relative functional gap is within the configured invariance threshold."""
        return report.relative_gap <= self.config.invariance_threshold

    def convergence(self, study: str) -> StudyResult:
        return run_study(study, self.config)

    def gen_pair(self, f: Grid2, params: typing.Optional[Params] = None) -> typing.Tuple[Grid2, Grid2, Params]:
        """The pair (f, ρ(g⁻¹)f) with g from params, or drawn from the search box when params is unset.

        Raises:
            SingularMatrix: if the requested element is degenerate.
        """
        if params is None:
            params = random_params(np.random.default_rng(self.config.seed), self.config.search)
        f1, f2 = generate_pair(f, element_from_params(params))
        return f1, f2, tuple(params)

    def calibrate(self) -> CalibrationResult:
        """Relative functional gaps over a generated corpus and the threshold separating matched from unmatched pairs."""
        pairs = corpus(self.config.corpus_size, seed=self.config.seed, box=self.config.search)
        cells = [axis.step if axis.count > 1 else 0.0 for axis in self.config.search.axes()]
        matched, unmatched, recovered = [], [], 0
        for index, pair in enumerate(pairs):
            aligned = self.align(pair.f1, pair.f2)
            gap = self.invariance(pair.f1, pair.f2, aligned=aligned).relative_gap
            logger.debug("Pair %d (matched=%s): gap %.3e.", index, pair.matched, gap)
            if pair.matched:
                matched.append(gap)
                if all(abs(a - b) <= cell + 1e-12 for a, b, cell in zip(aligned.params, pair.params, cells)):
                    recovered += 1
            else:
                unmatched.append(gap)

        matched_max = max(matched, default=0.0)
        unmatched_min = min(unmatched, default=math.inf)
        if matched_max > 0.0 and math.isfinite(unmatched_min):
            threshold = math.sqrt(matched_max * unmatched_min)
        elif math.isfinite(unmatched_min):
            threshold = 0.5 * unmatched_min
        else:
            threshold = matched_max
        separated = matched_max < unmatched_min
        if not separated:
            logger.warning("Corpus classes overlap: matched gaps up to %.3e, unmatched from %.3e.", matched_max, unmatched_min)
        return CalibrationResult(
            threshold=threshold,
            matched_max=matched_max,
            unmatched_min=unmatched_min,
            separated=separated,
            matched_gaps=matched,
            unmatched_gaps=unmatched,
            recovered=recovered,
        )
