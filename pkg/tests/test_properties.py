"""Property-based checks of the pure algebraic kernels.

These cover identities that hold for whole parameter regions rather than
single frozen points: equilibrium consistency of the derived quantities,
symmetries of the risk index, the front-fixing metric formula, and
linearity of the boundary-flux stencil.
"""

import dataclasses

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import wnvfronts as w

rates = st.floats(min_value=1e-3, max_value=50.0,
                  allow_nan=False, allow_infinity=False)
fractions = st.floats(min_value=0.0, max_value=1.0,
                      allow_nan=False, allow_infinity=False)
advections = st.floats(min_value=-20.0, max_value=20.0,
                       allow_nan=False, allow_infinity=False)
positions = st.floats(min_value=-100.0, max_value=100.0,
                      allow_nan=False, allow_infinity=False)
velocities = st.floats(min_value=-10.0, max_value=10.0,
                       allow_nan=False, allow_infinity=False)


@st.composite
def raw_params(draw):
    return w.RawParams(
        D1=draw(rates), D2=draw(rates), mu=draw(advections),
        alpha1=draw(fractions), alpha2=draw(fractions),
        beta=draw(rates), gamma=draw(rates), d=draw(rates),
        N1=draw(rates), N2=draw(rates), nu=draw(rates), h0=draw(rates))


@given(raw_params())
def test_derived_quantities_satisfy_their_defining_relations(raw):
    dp = w.derive_params(raw)
    assert dp.a1 == raw.alpha1 * raw.beta / raw.N1
    assert dp.a2 == raw.alpha2 * raw.beta / raw.N1
    P = dp.a1 * dp.a2 * raw.N1 * raw.N2
    if P > 0.0:
        assert np.isclose(dp.R_bulk, P / (raw.gamma * raw.d), rtol=1e-12)
    assert 0.0 <= dp.U_star <= raw.N1
    assert 0.0 <= dp.V_star <= raw.N2
    if dp.U_star > 0.0:
        # the endemic state must actually balance both reactions
        res1 = dp.a1 * (raw.N1 - dp.U_star) * dp.V_star - raw.gamma * dp.U_star
        res2 = dp.a2 * (raw.N2 - dp.V_star) * dp.U_star - raw.d * dp.V_star
        scale = raw.gamma * dp.U_star + raw.d * dp.V_star
        assert abs(res1) <= 1e-10 * scale
        assert abs(res2) <= 1e-10 * scale
        assert dp.R_bulk > 1.0


@given(raw_params(), st.floats(min_value=0.5, max_value=60.0),
       st.floats(min_value=-30.0, max_value=30.0),
       st.floats(min_value=0.0, max_value=15.0))
def test_risk_index_symmetries(raw, width, shift, mu):
    dp = w.derive_params(raw)
    if dp.a1 * dp.a2 == 0.0:
        return  # no transmission loop; index degenerates to zero
    base = w.risk_index(dp, raw, -width / 2, width / 2, mu)
    assert base.value >= 0.0
    assert np.isclose(base.value ** 2, base.inner, rtol=1e-12)
    mirrored = w.risk_index(dp, raw, -width / 2, width / 2, -mu)
    assert np.isclose(base.value, mirrored.value, rtol=1e-12)
    moved = w.risk_index(dp, raw, -width / 2 + shift, width / 2 + shift, mu)
    assert np.isclose(base.value, moved.value, rtol=1e-12)
    wider = w.risk_index(dp, raw, -width / 2 - 1.0, width / 2 + 1.0, mu)
    assert wider.value >= base.value
    calmer = w.risk_index(dp, raw, -width / 2, width / 2, mu + 1.0)
    assert calmer.value <= base.value


@given(st.floats(min_value=-50.0, max_value=50.0),
       st.floats(min_value=0.1, max_value=100.0),
       velocities, velocities,
       st.floats(min_value=-1.0, max_value=1.0))
def test_metric_terms_formula(g, width, gp, hp, y):
    h = g + width
    A, B = w.metric_terms(g, h, gp, hp, y)
    assert np.isclose(A, 4.0 / width ** 2, rtol=1e-12)
    assert np.isclose(B, -(y * (hp - gp) + (hp + gp)) / width, rtol=1e-10,
                      atol=1e-14)
    # array evaluation agrees with scalar evaluation pointwise
    ys = np.linspace(-1.0, 1.0, 7)
    _, Bs = w.metric_terms(g, h, gp, hp, ys)
    for yi, Bi in zip(ys, Bs):
        _, bi = w.metric_terms(g, h, gp, hp, float(yi))
        assert np.isclose(Bi, bi, rtol=1e-12, atol=1e-15)


@given(st.floats(min_value=1e-3, max_value=10.0),
       st.floats(min_value=0.1, max_value=5.0),
       st.integers(min_value=9, max_value=120))
@settings(deadline=None)
def test_boundary_flux_scales_linearly(nu, amp, n_y):
    raw = w.RawParams(D1=6.0, D2=1.0, mu=0.0, alpha1=0.5, alpha2=0.5,
                      beta=0.3, gamma=0.6, d=0.3, N1=20.0, N2=20.0,
                      nu=nu, h0=15.0)
    profile = w.InitialProfile(kind="cosine", amplitude_U=amp,
                               amplitude_V=amp)
    state = w.build_initial_state(raw, profile, n_y)
    gp, hp = w.boundary_flux(state, nu)
    assert gp <= 0.0 <= hp
    # doubling the recession coefficient doubles both front velocities
    gp2, hp2 = w.boundary_flux(state, 2.0 * nu)
    assert np.isclose(gp2, 2.0 * gp, rtol=1e-12)
    assert np.isclose(hp2, 2.0 * hp, rtol=1e-12)
    # doubling the field doubles the flux: the stencil is linear
    doubled = dataclasses.replace(state, W=2.0 * state.W, Z=2.0 * state.Z)
    gp3, hp3 = w.boundary_flux(doubled, nu)
    assert np.isclose(gp3, 2.0 * gp, rtol=1e-12)
    assert np.isclose(hp3, 2.0 * hp, rtol=1e-12)
