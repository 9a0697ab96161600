#include "finsler/ab.hpp"

#include <cmath>
#include <string>

namespace finsler {

namespace {

constexpr int N = 2;

struct MetricJets {
    M2<Jet> a;     // valid (2,0)
    M2<Jet> ainv;  // valid (2,0)
    Jet gamma[N][N][N]; // Gamma^i_{jk}, valid (1,0)
};

M2<Jet> invert2(const M2<Jet>& a) {
    Jet det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    double scale = 0.0;
    for (const auto& row : a)
        for (const auto& e : row) scale = std::max(scale, std::abs(e.value()));
    if (det.value() <= 1e-12 * scale * scale)
        throw SingularMetric("metric determinant " + std::to_string(det.value()) + " is not positive");
    return {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

MetricJets metric_jets(const MetricField& rm, const JetSpace& space, const Vec2& x) {
    MetricJets m;
    m.a = rm.eval(space, x);
    m.ainv = invert2(m.a);
    Jet da[N][N][N]; // d_k a_ij
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            da[i][j][0] = m.a[i][j].derivative(VarX1);
            da[i][j][1] = m.a[i][j].derivative(VarX2);
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                Jet sum = Jet::constant(space, 0.0);
                for (int l = 0; l < N; ++l)
                    sum += m.ainv[i][l] * (da[l][k][j] + da[j][l][k] - da[j][k][l]);
                m.gamma[i][j][k] = 0.5 * sum;
            }
    return m;
}

// R^m_{kij} values from Gamma jets
void curvature_values(const MetricJets& m, double R[N][N][N][N]) {
    double dgamma[N][N][N][N]; // d_l Gamma^m_{kj}
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c) {
                dgamma[a][b][c][0] = m.gamma[a][b][c].partial({1, 0, 0, 0});
                dgamma[a][b][c][1] = m.gamma[a][b][c].partial({0, 1, 0, 0});
            }
    for (int mm = 0; mm < N; ++mm)
        for (int k = 0; k < N; ++k)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    double v = dgamma[mm][k][j][i] - dgamma[mm][k][i][j];
                    for (int p = 0; p < N; ++p)
                        v += m.gamma[mm][i][p].value() * m.gamma[p][k][j].value() -
                             m.gamma[mm][j][p].value() * m.gamma[p][k][i].value();
                    R[mm][k][i][j] = v;
                }
}

double max_abs(std::initializer_list<double> xs) {
    double m = 0.0;
    for (double v : xs) m = std::max(m, std::abs(v));
    return m;
}

// residual normalized to be scale-free: |lhs - rhs| / (1 + max |term|)
double nres(double lhs, double rhs) { return std::abs(lhs - rhs) / (1.0 + max_abs({lhs, rhs})); }

} // namespace

ABTensorSet ab_tensors(const MetricField& rm, const OneFormField& of, const Vec2& x) {
    JetSpace space(2, 0);
    MetricJets m = metric_jets(rm, space, x);
    V2<Jet> b = of.eval(space, x);

    ABTensorSet set;
    set.x = x;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            set.a[i][j] = m.a[i][j].value();
            set.ainv[i][j] = m.ainv[i][j].value();
        }
    set.det_a = set.a[0][0] * set.a[1][1] - set.a[0][1] * set.a[1][0];

    // b_{i|j} jets (valid (1,0)) and the r/s split
    Jet bij[N][N], rj[N][N], sj[N][N];
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Jet d = (j == 0) ? b[i].derivative(VarX1) : b[i].derivative(VarX2);
            for (int mm = 0; mm < N; ++mm) d -= m.gamma[mm][i][j] * b[mm];
            bij[i][j] = d;
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            rj[i][j] = 0.5 * (bij[i][j] + bij[j][i]);
            sj[i][j] = 0.5 * (bij[i][j] - bij[j][i]);
        }

    V2<Jet> bu = {m.ainv[0][0] * b[0] + m.ainv[0][1] * b[1],
                  m.ainv[1][0] * b[0] + m.ainv[1][1] * b[1]};
    Jet b2 = bu[0] * b[0] + bu[1] * b[1];

    for (int i = 0; i < N; ++i) {
        set.b[i] = b[i].value();
        set.bu[i] = bu[i].value();
        for (int j = 0; j < N; ++j) {
            set.bij[i][j] = bij[i][j].value();
            set.r[i][j] = rj[i][j].value();
            set.s[i][j] = sj[i][j].value();
        }
    }
    set.b2 = b2.value();

    // raising and contractions (plain values)
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double rv = 0.0, sv = 0.0;
            for (int k = 0; k < N; ++k) {
                rv += set.ainv[i][k] * set.r[k][j];
                sv += set.ainv[i][k] * set.s[k][j];
            }
            set.ru[i][j] = rv;
            set.su[i][j] = sv;
        }
    for (int j = 0; j < N; ++j) {
        set.rl[j] = set.bu[0] * set.r[0][j] + set.bu[1] * set.r[1][j];
        set.sl[j] = set.bu[0] * set.s[0][j] + set.bu[1] * set.s[1][j];
    }
    for (int i = 0; i < N; ++i) {
        set.rup[i] = set.ainv[i][0] * set.rl[0] + set.ainv[i][1] * set.rl[1];
        set.sup[i] = set.ainv[i][0] * set.sl[0] + set.ainv[i][1] * set.sl[1];
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double qv = 0.0, tv = 0.0;
            for (int mm = 0; mm < N; ++mm) {
                qv += set.r[i][mm] * set.su[mm][j];
                tv += set.s[i][mm] * set.su[mm][j];
            }
            set.q[i][j] = qv;
            set.t[i][j] = tv;
        }
    for (int j = 0; j < N; ++j) {
        set.ql[j] = set.bu[0] * set.q[0][j] + set.bu[1] * set.q[1][j];
        set.tl[j] = set.bu[0] * set.t[0][j] + set.bu[1] * set.t[1][j];
    }
    set.r_scalar = set.bu[0] * set.rl[0] + set.bu[1] * set.rl[1];
    set.trace_r = set.ainv[0][0] * set.r[0][0] + set.ainv[0][1] * set.r[1][0] +
                  set.ainv[1][0] * set.r[0][1] + set.ainv[1][1] * set.r[1][1];
    set.trace_t = set.ainv[0][0] * set.t[0][0] + set.ainv[0][1] * set.t[1][0] +
                  set.ainv[1][0] * set.t[0][1] + set.ainv[1][1] * set.t[1][1];
    set.smsm = set.sup[0] * set.sl[0] + set.sup[1] * set.sl[1];
    set.theta = set.b2 > 0.0 ? set.smsm / set.b2 : 0.0;

    // second layer: T_{ij|k} = d_k T_ij - Gamma^m_{ik} T_mj - Gamma^m_{jk} T_im
    auto cov_d2 = [&](Jet T[N][N], double out[N][N][N]) {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    double v = (k == 0) ? T[i][j].partial({1, 0, 0, 0}) : T[i][j].partial({0, 1, 0, 0});
                    for (int mm = 0; mm < N; ++mm)
                        v -= m.gamma[mm][i][k].value() * T[mm][j].value() +
                             m.gamma[mm][j][k].value() * T[i][mm].value();
                    out[i][j][k] = v;
                }
    };
    cov_d2(rj, set.rd);
    cov_d2(sj, set.sd);

    // contracted covectors r_i, s_i as jets, then their covariant derivatives
    V2<Jet> rlj, slj;
    for (int j = 0; j < N; ++j) {
        rlj[j] = bu[0] * rj[0][j] + bu[1] * rj[1][j];
        slj[j] = bu[0] * sj[0][j] + bu[1] * sj[1][j];
    }
    auto cov_d1 = [&](const V2<Jet>& T, M2<double>& out) {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                double v = (j == 0) ? T[i].partial({1, 0, 0, 0}) : T[i].partial({0, 1, 0, 0});
                for (int mm = 0; mm < N; ++mm) v -= m.gamma[mm][i][j].value() * T[mm].value();
                out[i][j] = v;
            }
    };
    cov_d1(rlj, set.rld);
    cov_d1(slj, set.sld);

    // d_i of the scalar r^k_k
    Jet trace_r_jet = Jet::constant(space, 0.0);
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) trace_r_jet += m.ainv[k][j] * rj[j][k];
    set.trace_r_d[0] = trace_r_jet.partial({1, 0, 0, 0});
    set.trace_r_d[1] = trace_r_jet.partial({0, 1, 0, 0});

    // divergences of the raised vectors: V^k_{|k} = d_k V^k + Gamma^k_{km} V^m
    auto div = [&](const V2<Jet>& low) {
        V2<Jet> up = {m.ainv[0][0] * low[0] + m.ainv[0][1] * low[1],
                      m.ainv[1][0] * low[0] + m.ainv[1][1] * low[1]};
        double v = up[0].partial({1, 0, 0, 0}) + up[1].partial({0, 1, 0, 0});
        for (int k = 0; k < N; ++k)
            for (int mm = 0; mm < N; ++mm) v += m.gamma[k][k][mm].value() * up[mm].value();
        return v;
    };
    set.div_r = div(rlj);
    set.div_s = div(slj);

    return set;
}

AlphaCurvature alpha_curvature(const MetricField& rm, const Vec2& x) {
    JetSpace space(2, 0);
    MetricJets m = metric_jets(rm, space, x);
    double R[N][N][N][N];
    curvature_values(m, R);

    AlphaCurvature c;
    double a[N][N], ainv[N][N];
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            a[i][j] = m.a[i][j].value();
            ainv[i][j] = m.ainv[i][j].value();
        }
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    double v = 0.0;
                    for (int mm = 0; mm < N; ++mm) v += a[l][mm] * R[mm][k][i][j];
                    c.Rbar[k][l][i][j] = v;
                }
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) {
            double v = 0.0;
            for (int mm = 0; mm < N; ++mm) v += R[mm][k][mm][j];
            c.Ric[k][j] = v;
        }
    c.lambda = 0.5 * (ainv[0][0] * c.Ric[0][0] + ainv[0][1] * c.Ric[1][0] + ainv[1][0] * c.Ric[0][1] +
                      ainv[1][1] * c.Ric[1][1]);
    double res = 0.0, scale = 0.0;
    for (int j = 0; j < N; ++j)
        for (int mm = 0; mm < N; ++mm)
            for (int i = 0; i < N; ++i)
                for (int k = 0; k < N; ++k) {
                    const double expect = c.lambda * (a[j][k] * a[mm][i] - a[i][j] * a[mm][k]);
                    res = std::max(res, std::abs(c.Rbar[j][mm][i][k] - expect));
                    scale = std::max(scale, std::abs(expect));
                }
    c.space_form_residual = res / (1.0 + scale);
    return c;
}

RicciIdentityResiduals ricci_identity_residuals(const ABTensorSet& set, const AlphaCurvature& curv,
                                                const Vec2& y) {
    RicciIdentityResiduals out{};

    // #1  s_{ij|k} = r_{ik|j} - r_{jk|i} - b^l Rbar_{klij}, max over components
    double r1 = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                double rhs = set.rd[i][k][j] - set.rd[j][k][i];
                for (int l = 0; l < N; ++l) rhs -= set.bu[l] * curv.Rbar[k][l][i][j];
                r1 = std::max(r1, nres(set.sd[i][j][k], rhs));
            }
    out.res[0] = r1;

    // #2  s^k_{0|k} = r^k_{k|0} - r^k_{0|k} + b^l Ric_{l0}
    double lhs2 = 0.0, t2a = 0.0, t2b = 0.0, t2c = 0.0;
    for (int j = 0; j < N; ++j) {
        double skjk = 0.0, rkjk = 0.0;
        for (int k = 0; k < N; ++k)
            for (int mm = 0; mm < N; ++mm) {
                skjk += set.ainv[k][mm] * set.sd[mm][j][k];
                rkjk += set.ainv[k][mm] * set.rd[mm][j][k];
            }
        lhs2 += skjk * y[j];
        t2a += set.trace_r_d[j] * y[j];
        t2b += rkjk * y[j];
        for (int l = 0; l < N; ++l) t2c += set.bu[l] * curv.Ric[l][j] * y[j];
    }
    out.res[1] = std::abs(lhs2 - (t2a - t2b + t2c)) / (1.0 + max_abs({lhs2, t2a, t2b, t2c}));

    // #3  b^k s_{0|k} = r_k s^k_0 - t_0 + b^k b^l r_{kl|0} - b^k b^l r_{k0|l}
    double lhs3 = 0.0, t3a = 0.0, t3b = 0.0, t3c = 0.0, t3d = 0.0;
    for (int j = 0; j < N; ++j) {
        double bsl = 0.0;
        for (int k = 0; k < N; ++k) bsl += set.bu[k] * set.sld[j][k];
        lhs3 += bsl * y[j];
        double rsk = 0.0;
        for (int k = 0; k < N; ++k) rsk += set.rl[k] * set.su[k][j];
        t3a += rsk * y[j];
        t3b += set.tl[j] * y[j];
        for (int k = 0; k < N; ++k)
            for (int l = 0; l < N; ++l) {
                t3c += set.bu[k] * set.bu[l] * set.rd[k][l][j] * y[j];
                t3d += set.bu[k] * set.bu[l] * set.rd[k][j][l] * y[j];
            }
    }
    out.res[2] = std::abs(lhs3 - (t3a - t3b + t3c - t3d)) / (1.0 + max_abs({lhs3, t3a, t3b, t3c, t3d}));

    // #4  s^k_{|k} = r^k_{|k} - t^k_k - r^i_j r^j_i - b^i d_i(r^k_k) - b^k b^i Ric_{ik}
    double rr = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) rr += set.ru[i][j] * set.ru[j][i];
    double btr = set.bu[0] * set.trace_r_d[0] + set.bu[1] * set.trace_r_d[1];
    double bbric = 0.0;
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < N; ++i) bbric += set.bu[k] * set.bu[i] * curv.Ric[i][k];
    const double rhs4 = set.div_r - set.trace_t - rr - btr - bbric;
    out.res[3] = std::abs(set.div_s - rhs4) /
                 (1.0 + max_abs({set.div_s, set.div_r, set.trace_t, rr, btr, bbric}));
    return out;
}

RicciIdentityResiduals ricci_identity_residuals(const MetricField& rm, const OneFormField& of,
                                                const Vec2& x, const Vec2& y) {
    return ricci_identity_residuals(ab_tensors(rm, of, x), alpha_curvature(rm, x), y);
}

namespace {

// deterministic direction set used by pointwise identity checks
std::array<Vec2, 12> probe_directions(const Vec2& x) {
    std::array<Vec2, 12> dirs;
    for (int i = 0; i < 8; ++i) {
        const double t = 2.0 * M_PI * i / 8.0 + 0.1;
        dirs[static_cast<std::size_t>(i)] = {std::cos(t), std::sin(t)};
    }
    Rng rng = Rng::substream(0x5eedf00d,
                             static_cast<std::uint64_t>(std::llround(x[0] * 4096.0)) * 65537u +
                                 static_cast<std::uint64_t>(std::llround(x[1] * 4096.0)));
    for (int i = 8; i < 12; ++i) dirs[static_cast<std::size_t>(i)] = rng.unit_direction();
    return dirs;
}

} // namespace

ThetaDecomposition theta_decomposition(const ABTensorSet& set) {
    if (set.b2 <= 1e-12) throw DegenerateForm("b^2 = " + std::to_string(set.b2) + " is too small");
    ThetaDecomposition out{};
    out.theta = set.smsm / set.b2;
    out.residuals = {0.0, 0.0, 0.0};
    for (const Vec2& y : probe_directions(set.x)) {
        double alpha2 = 0.0, beta = 0.0, s0 = 0.0, t00 = 0.0;
        for (int i = 0; i < N; ++i) {
            beta += set.b[i] * y[i];
            s0 += set.sl[i] * y[i];
            for (int j = 0; j < N; ++j) {
                alpha2 += set.a[i][j] * y[i] * y[j];
                t00 += set.t[i][j] * y[i] * y[j];
            }
        }
        out.residuals[0] = std::max(out.residuals[0], nres(s0 * s0, out.theta * (set.b2 * alpha2 - beta * beta)));
        out.residuals[1] = std::max(out.residuals[1], nres(t00, -out.theta * alpha2));
        out.residuals[2] = std::max(
            out.residuals[2],
            nres(t00, -(set.smsm * beta * beta + set.b2 * s0 * s0) / (set.b2 * set.b2)));
    }
    return out;
}

ThetaDecomposition theta_decomposition(const MetricField& rm, const OneFormField& of, const Vec2& x) {
    return theta_decomposition(ab_tensors(rm, of, x));
}

double r00_residual(const ABTensorSet& set, double k1, double k2) {
    const double den = 4.0 + (k1 + 3.0 * k2) * set.b2;
    if (std::abs(den) < 1e-9)
        throw DegenerateDenominator("4 + (k1+3k2) b^2 = " + std::to_string(den) + " is degenerate");
    const double coef = (3.0 * k1 + k2 + 4.0 * k1 * k2 * set.b2) / den;
    double res = 0.0, scale = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double rhs = coef * (set.b[i] * set.sl[j] + set.b[j] * set.sl[i]);
            res = std::max(res, std::abs(set.r[i][j] - rhs));
            scale = std::max(scale, max_abs({set.r[i][j], rhs}));
        }
    return res / (1.0 + scale);
}

double closure_residual(const ABTensorSet& set) {
    if (set.b2 <= 1e-12) throw DegenerateForm("b^2 too small for the closure identity");
    double res = 0.0, scale = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double rhs = (set.b[i] * set.sl[j] - set.b[j] * set.sl[i]) / set.b2;
            res = std::max(res, std::abs(set.s[i][j] - rhs));
            scale = std::max(scale, max_abs({set.s[i][j], rhs}));
        }
    return res / (1.0 + scale);
}

ConformalKillingResult conformal_killing_check(const ScalarField& sigma, const ScalarField& W1,
                                               const ScalarField& W2, const Vec2& x) {
    JetSpace space(2, 0);
    Jet w1 = W1.eval(space, x);
    Jet w2 = W2.eval(space, x);
    Jet sg = sigma.eval(space, x);

    const double dW[2][2] = {{w1.partial({1, 0, 0, 0}), w1.partial({0, 1, 0, 0})},
                             {w2.partial({1, 0, 0, 0}), w2.partial({0, 1, 0, 0})}};

    ConformalKillingResult out{};
    out.conditions_residual = std::max(std::abs(dW[0][1] + dW[1][0]), std::abs(dW[0][0] - dW[1][1]));

    const double tau = dW[0][0];
    const double wgrad = w1.value() * sg.partial({1, 0, 0, 0}) + w2.value() * sg.partial({0, 1, 0, 0});
    out.c = -0.5 * (tau + wgrad);

    // W_{0|0} = -2 c alpha^2 with W_i = e^{2 sigma} W^i and the Levi-Civita
    // connection of a = e^{2 sigma} delta
    MetricField a = MetricField::conformal(sigma);
    MetricJets m = metric_jets(a, space, x);
    Jet e2s = exp(2.0 * sg);
    V2<Jet> wl = {e2s * w1, e2s * w2};
    double wd[2][2];
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double v = (j == 0) ? wl[i].partial({1, 0, 0, 0}) : wl[i].partial({0, 1, 0, 0});
            for (int mm = 0; mm < N; ++mm) v -= m.gamma[mm][i][j].value() * wl[mm].value();
            wd[i][j] = v;
        }
    const double e2sv = e2s.value();
    out.covderiv_residual = 0.0;
    for (const Vec2& y : probe_directions(x)) {
        const double alpha2 = e2sv * (y[0] * y[0] + y[1] * y[1]);
        double w00 = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) w00 += wd[i][j] * y[i] * y[j];
        out.covderiv_residual = std::max(out.covderiv_residual, nres(w00, -2.0 * out.c * alpha2));
    }
    return out;
}

} // namespace finsler
