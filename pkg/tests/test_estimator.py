from math import pi

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from slideocam import DesignParams, SlideOCam
from slideocam.core import cam_profile_xy, pressure_angle
from slideocam.errors import NoRootInBracket, ValidationError


def test_params_and_clone():
    est = SlideOCam(n=2, a4=4.0)
    assert est.get_params()["n"] == 2
    c = clone(est).set_params(e=20.0)
    assert c.e == 20.0 and est.e == 9.0


def test_fit_attributes():
    est = SlideOCam().fit()
    assert est.delta_ == pytest.approx(-1.233646013772493, abs=1e-10)
    assert not est.feasibility_.feasible
    assert len(est.assembly_.cams) == 2
    assert est.score() == pytest.approx(-est.pressure_extremum_.degrees)
    assert est.eta == pytest.approx(0.18)


def test_transform_predict():
    est = SlideOCam(e=20.0).fit()
    psi = np.linspace(0, 2 * pi, 7)
    d = DesignParams(p=50, n=1, m=2, e=20.0, a4=10.0)
    np.testing.assert_array_equal(est.transform(psi), cam_profile_xy(d, psi))
    np.testing.assert_array_equal(est.transform(psi[:, None]), est.transform(psi))
    np.testing.assert_array_equal(est.predict(psi), pressure_angle(d, psi))
    assert est.fit_transform(psi).shape == (7, 2)
    assert est.pitch(psi).shape == (7, 2)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SlideOCam().transform([0.0])


def test_errors():
    with pytest.raises(ValidationError):
        SlideOCam(p=-1).fit()
    with pytest.raises(NoRootInBracket):
        SlideOCam(e=4.0).fit()
    with pytest.raises(ValidationError):
        SlideOCam().fit().transform(np.zeros((3, 2)))


def test_from_params():
    d = DesignParams(p=40, n=3, m=3, e=15, a4=3)
    est = SlideOCam.from_params(d, samples=90).fit()
    assert est.params_ == d and est.samples == 90
