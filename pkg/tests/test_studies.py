"""Tests for the refinement studies."""
import pytest

from affgroup.models.report import StudyResult, StudyRow
from affgroup.modules.studies import STUDIES, delta_study, run_study


class TestStudies:
    def test_delta_study_converges(self):
        result = delta_study()
        assert result.decreasing
        assert result.rows[-1].error < 1e-2

    def test_registry(self):
        assert sorted(STUDIES) == ["delta", "haar", "theorem4"]

    def test_unknown_study(self):
        with pytest.raises(KeyError):
            run_study("simpson")

    def test_csv(self):
        result = StudyResult(study="x", rows=[StudyRow(resolution=1.0, error=0.5), StudyRow(resolution=2.0, error=0.25)])
        assert result.to_csv() == "resolution,error\n1,0.5\n2,0.25\n"
        assert result.decreasing

    def test_not_decreasing(self):
        result = StudyResult(study="x", rows=[StudyRow(resolution=1.0, error=0.5), StudyRow(resolution=2.0, error=0.5)])
        assert not result.decreasing
