#include "tdgl/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tdgl/cholesky.hpp"

namespace tdgl {

void Params::validate() const
{
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
}

Discretization::Discretization(Mesh mesh)
    : mesh_(std::make_shared<const Mesh>(std::move(mesh))), p1_(*mesh_), nedelec_(*mesh_),
      rule_(make_quadrature(4))
{
    const int nt = static_cast<int>(mesh_->num_triangles());
    geometry_.reserve(nt);
    for (int t = 0; t < nt; ++t) geometry_.push_back(make_element_geometry(*mesh_, t));

    SparsityBuilder coupled(num_total(), num_total());
    SparsityBuilder scalar(num_scalar(), num_scalar());
    SparsityBuilder vector(num_vector(), num_vector());
    for (int t = 0; t < nt; ++t) {
        const auto d = block_dofs(t);
        coupled.insert_block(d, d);
        const auto v = p1_.dofs(t);
        scalar.insert_block(v, v);
        const auto e = nedelec_.dofs(t);
        vector.insert_block(e, e);
    }
    block_pattern_ = coupled.build();
    scalar_pattern_ = scalar.build();
    vector_pattern_ = vector.build();
}

std::array<int, 12> Discretization::block_dofs(int t) const
{
    std::array<int, 12> d{};
    const auto v = p1_.dofs(t);
    const auto e = nedelec_.dofs(t);
    const int ni = static_cast<int>(psi_i_offset());
    const int na = static_cast<int>(a_offset());
    for (int k = 0; k < 3; ++k) {
        d[k] = v[k];
        d[3 + k] = ni + v[k];
    }
    for (int k = 0; k < 6; ++k) d[6 + k] = na + e[k];
    return d;
}

State Discretization::zero_state() const
{
    return State{std::vector<double>(num_vector(), 0.0), std::vector<double>(num_scalar(), 0.0),
                 std::vector<double>(num_scalar(), 0.0)};
}

std::vector<double> Discretization::pack(const State& s) const
{
    check(s);
    std::vector<double> x;
    x.reserve(num_total());
    x.insert(x.end(), s.psi_r.begin(), s.psi_r.end());
    x.insert(x.end(), s.psi_i.begin(), s.psi_i.end());
    x.insert(x.end(), s.a.begin(), s.a.end());
    return x;
}

State Discretization::unpack(std::span<const double> x) const
{
    if (x.size() != num_total()) throw std::invalid_argument("packed vector has the wrong length");
    const auto ns = static_cast<std::ptrdiff_t>(num_scalar());
    State s;
    s.psi_r.assign(x.begin(), x.begin() + ns);
    s.psi_i.assign(x.begin() + ns, x.begin() + 2 * ns);
    s.a.assign(x.begin() + 2 * ns, x.end());
    return s;
}

void Discretization::check(const State& s) const
{
    if (s.a.size() != num_vector() || s.psi_r.size() != num_scalar() || s.psi_i.size() != num_scalar()) {
        throw std::invalid_argument("state does not match the discretization");
    }
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(s.a) || !finite(s.psi_r) || !finite(s.psi_i)) {
        throw std::invalid_argument("state has non-finite entries");
    }
}

namespace {

/// Basis data and state fields at one quadrature point.
struct PointData {
    P1Values p1;
    NedelecValues ned;
    double pr = 0.0, pi = 0.0;
    Vec2 gpr, gpi, a;
    double curl_a = 0.0;
};

struct LocalState {
    std::array<double, 3> pr, pi;
    std::array<double, 6> a;
};

LocalState gather(const Discretization& disc, const State& s, int t)
{
    LocalState l;
    const auto v = disc.p1().dofs(t);
    const auto e = disc.nedelec().dofs(t);
    for (int k = 0; k < 3; ++k) {
        l.pr[k] = s.psi_r[v[k]];
        l.pi[k] = s.psi_i[v[k]];
    }
    for (int k = 0; k < 6; ++k) l.a[k] = s.a[e[k]];
    return l;
}

void evaluate_fields(const LocalState& l, PointData& d)
{
    d.pr = d.pi = d.curl_a = 0.0;
    d.gpr = d.gpi = d.a = Vec2{};
    for (int k = 0; k < 3; ++k) {
        d.pr += l.pr[k] * d.p1.value[k];
        d.pi += l.pi[k] * d.p1.value[k];
        d.gpr += l.pr[k] * d.p1.grad[k];
        d.gpi += l.pi[k] * d.p1.grad[k];
    }
    for (int k = 0; k < 6; ++k) {
        d.a += l.a[k] * d.ned.value[k];
        d.curl_a += l.a[k] * d.ned.curl[k];
    }
}

PointData basis_at(const Discretization& disc, int t, const Barycentric& b)
{
    const auto& g = disc.geometry(t);
    PointData d;
    d.p1 = eval_p1(g, b);
    d.ned = eval_nedelec(g, disc.mesh().triangle_edges(t), b);
    return d;
}

void check_pair(const Discretization& disc, const State& a, const State& b)
{
    disc.check(a);
    disc.check(b);
}

}  // namespace

double gibbs_energy(const Discretization& disc, const State& state, const Params& params, double t)
{
    disc.check(state);
    const double ik = 1.0 / params.kappa;
    const auto& rule = disc.rule();
    double energy = 0.0;
    for (int e = 0; e < static_cast<int>(disc.mesh().num_triangles()); ++e) {
        const auto& geom = disc.geometry(e);
        const auto l = gather(disc, state, e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            auto d = basis_at(disc, e, rule.points[q]);
            evaluate_fields(l, d);
            const double w = 2.0 * geom.area * rule.weights[q];
            // (i/κ)∇ψ + Aψ split into real and imaginary parts.
            const Vec2 re = d.pr * d.a - ik * d.gpi;
            const Vec2 im = d.pi * d.a + ik * d.gpr;
            const double dens = d.pr * d.pr + d.pi * d.pi - 1.0;
            const double b = d.curl_a - params.applied_field(geom.map(rule.points[q]), t);
            energy += w * (dot(re, re) + dot(im, im) + 0.5 * dens * dens + b * b);
        }
    }
    return energy;
}

std::vector<double> assemble_residual(const Discretization& disc, const State& state,
                                      const State& prev, const Params& params,
                                      const SourceTerms* sources, double t_next)
{
    params.validate();
    check_pair(disc, state, prev);
    const double ik = 1.0 / params.kappa;
    const double ik2 = ik * ik;
    const double idt = 1.0 / params.dt;
    const double sdt = params.sigma / params.dt;
    const auto& rule = disc.rule();

    std::vector<double> res(disc.num_total(), 0.0);
    for (int e = 0; e < static_cast<int>(disc.mesh().num_triangles()); ++e) {
        const auto& geom = disc.geometry(e);
        const auto cur = gather(disc, state, e);
        const auto old = gather(disc, prev, e);
        std::array<double, 12> local{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            auto d = basis_at(disc, e, rule.points[q]);
            auto p = d;
            evaluate_fields(cur, d);
            evaluate_fields(old, p);
            const double w = 2.0 * geom.area * rule.weights[q];
            const Vec2 x = geom.map(rule.points[q]);
            const double h = params.applied_field(x, t_next);
            std::complex<double> g{};
            Vec2 f;
            if (sources) {
                g = sources->g(x, t_next);
                f = sources->f(x, t_next);
            }

            const double a2 = dot(d.a, d.a);
            const double rho = d.pr * d.pr + d.pi * d.pi;
            const double ga_i = dot(d.gpi, d.a);
            const double ga_r = dot(d.gpr, d.a);
            const double coef_r = idt * (p.pr - d.pr) - (a2 + rho - 1.0) * d.pr + ik * ga_i + g.real();
            const double coef_i = idt * (p.pi - d.pi) - (a2 + rho - 1.0) * d.pi - ik * ga_r + g.imag();
            const Vec2 flux_r = -ik2 * d.gpr - ik * d.pi * d.a;
            const Vec2 flux_i = -ik2 * d.gpi + ik * d.pr * d.a;
            const Vec2 react = sdt * (p.a - d.a) - rho * d.a + ik * d.pr * d.gpi - ik * d.pi * d.gpr + f;
            const double circ = h - d.curl_a;

            for (int k = 0; k < 3; ++k) {
                const double phi = d.p1.value[k];
                const Vec2& gphi = d.p1.grad[k];
                local[k] += w * (coef_r * phi + dot(flux_r, gphi));
                local[3 + k] += w * (coef_i * phi + dot(flux_i, gphi));
            }
            for (int k = 0; k < 6; ++k) {
                local[6 + k] += w * (dot(react, d.ned.value[k]) + circ * d.ned.curl[k]);
            }
        }
        const auto dofs = disc.block_dofs(e);
        for (int k = 0; k < 12; ++k) res[dofs[k]] += local[k];
    }
    return res;
}

CsrMatrix assemble_jacobian(const Discretization& disc, const State& state, const Params& params)
{
    params.validate();
    disc.check(state);
    const double ik = 1.0 / params.kappa;
    const double ik2 = ik * ik;
    const double idt = 1.0 / params.dt;
    const double sdt = params.sigma / params.dt;
    const auto& rule = disc.rule();

    CsrMatrix jac = disc.block_pattern();
    jac.set_zero();
    for (int e = 0; e < static_cast<int>(disc.mesh().num_triangles()); ++e) {
        const auto& geom = disc.geometry(e);
        const auto cur = gather(disc, state, e);
        double m[12][12] = {};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            auto d = basis_at(disc, e, rule.points[q]);
            evaluate_fields(cur, d);
            const double w = 2.0 * geom.area * rule.weights[q];
            const double a2 = dot(d.a, d.a);
            const double rho = d.pr * d.pr + d.pi * d.pi;
            const double react_rr = idt + a2 + 3.0 * d.pr * d.pr + d.pi * d.pi - 1.0;
            const double react_ii = idt + a2 + d.pr * d.pr + 3.0 * d.pi * d.pi - 1.0;
            const double cross_ri = 2.0 * d.pr * d.pi;
            const auto& phi = d.p1.value;
            const auto& gphi = d.p1.grad;
            const auto& nv = d.ned.value;
            const auto& nc = d.ned.curl;

            std::array<double, 3> a_gphi;
            for (int k = 0; k < 3; ++k) a_gphi[k] = dot(d.a, gphi[k]);

            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const double mass = phi[i] * phi[j];
                    const double stiff = ik2 * dot(gphi[i], gphi[j]);
                    m[i][j] += w * (react_rr * mass + stiff);
                    m[3 + i][3 + j] += w * (react_ii * mass + stiff);
                    // Row ψ_r, column ψ_i, and the mirrored ψ_i / ψ_r block.
                    m[i][3 + j] += w * (cross_ri * mass - ik * a_gphi[j] * phi[i] + ik * phi[j] * a_gphi[i]);
                    m[3 + i][j] += w * (cross_ri * mass - ik * phi[j] * a_gphi[i] + ik * a_gphi[j] * phi[i]);
                }
            }
            for (int i = 0; i < 3; ++i) {
                for (int c = 0; c < 6; ++c) {
                    const double an = dot(d.a, nv[c]);
                    const double rA = 2.0 * d.pr * an * phi[i] - ik * dot(d.gpi, nv[c]) * phi[i] +
                                      ik * d.pi * dot(nv[c], gphi[i]);
                    const double iA = 2.0 * d.pi * an * phi[i] - ik * d.pr * dot(nv[c], gphi[i]) +
                                      ik * dot(d.gpr, nv[c]) * phi[i];
                    m[i][6 + c] += w * rA;
                    m[3 + i][6 + c] += w * iA;
                    // The A rows are the transposes: the forms derive from one energy.
                    m[6 + c][i] += w * rA;
                    m[6 + c][3 + i] += w * iA;
                }
            }
            for (int r = 0; r < 6; ++r) {
                for (int c = 0; c < 6; ++c) {
                    m[6 + r][6 + c] += w * ((sdt + rho) * dot(nv[r], nv[c]) + nc[r] * nc[c]);
                }
            }
        }
        const auto dofs = disc.block_dofs(e);
        for (int i = 0; i < 12; ++i) {
            for (int j = 0; j < 12; ++j) jac.add(dofs[i], dofs[j], m[i][j]);
        }
    }
    return jac;
}

PreconditionerBlocks assemble_preconditioner_blocks(const Discretization& disc, const Params& params)
{
    params.validate();
    const double idt = 1.0 / params.dt;
    const double ik2 = 1.0 / (params.kappa * params.kappa);
    const double sdt = params.sigma / params.dt;
    const auto& rule = disc.rule();

    auto scalar_block = [&] {
        CsrMatrix p = disc.scalar_pattern();
        p.set_zero();
        for (int e = 0; e < static_cast<int>(disc.mesh().num_triangles()); ++e) {
            const auto& geom = disc.geometry(e);
            double m[3][3] = {};
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const auto v = eval_p1(geom, rule.points[q]);
                const double w = 2.0 * geom.area * rule.weights[q];
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) {
                        m[i][j] += w * (idt * v.value[i] * v.value[j] + ik2 * dot(v.grad[i], v.grad[j]));
                    }
                }
            }
            const auto d = disc.p1().dofs(e);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) p.add(d[i], d[j], m[i][j]);
            }
        }
        return p;
    };

    CsrMatrix pa = disc.vector_pattern();
    pa.set_zero();
    for (int e = 0; e < static_cast<int>(disc.mesh().num_triangles()); ++e) {
        const auto& geom = disc.geometry(e);
        const auto& edges = disc.mesh().triangle_edges(e);
        double m[6][6] = {};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto v = eval_nedelec(geom, edges, rule.points[q]);
            const double w = 2.0 * geom.area * rule.weights[q];
            for (int i = 0; i < 6; ++i) {
                for (int j = 0; j < 6; ++j) {
                    m[i][j] += w * (sdt * dot(v.value[i], v.value[j]) + v.curl[i] * v.curl[j]);
                }
            }
        }
        const auto d = disc.nedelec().dofs(e);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) pa.add(d[i], d[j], m[i][j]);
        }
    }
    return PreconditionerBlocks{scalar_block(), scalar_block(), std::move(pa)};
}

double triple_norm_squared(const PreconditionerBlocks& blocks, const Discretization& disc,
                           std::span<const double> w)
{
    const std::size_t ns = disc.num_scalar();
    const auto wr = w.subspan(0, ns);
    const auto wi = w.subspan(ns, ns);
    const auto wa = w.subspan(2 * ns, disc.num_vector());
    return dot(wr, blocks.psi_r.multiply(wr)) + dot(wi, blocks.psi_i.multiply(wi)) +
           dot(wa, blocks.a.multiply(wa));
}

namespace {

constexpr double kFdStep = 1e-6;

double fd_curl(const std::function<Vec2(Vec2)>& f, Vec2 x)
{
    const double h = kFdStep;
    const double dxa2 = (f({x.x + h, x.y}).y - f({x.x - h, x.y}).y) / (2 * h);
    const double dya1 = (f({x.x, x.y + h}).x - f({x.x, x.y - h}).x) / (2 * h);
    return dxa2 - dya1;
}

std::array<std::complex<double>, 2> fd_grad(const std::function<std::complex<double>(Vec2)>& f, Vec2 x)
{
    const double h = kFdStep;
    return {(f({x.x + h, x.y}) - f({x.x - h, x.y})) / (2 * h),
            (f({x.x, x.y + h}) - f({x.x, x.y - h})) / (2 * h)};
}

}  // namespace

State initial_projection(const Discretization& disc, const InitialData& data)
{
    if (!data.a0 || !data.psi0) throw std::invalid_argument("initial data needs A0 and psi0");
    const QuadratureRule rule = make_quadrature(6);
    const int nt = static_cast<int>(disc.mesh().num_triangles());

    CsrMatrix ks = disc.scalar_pattern();
    CsrMatrix kv = disc.vector_pattern();
    ks.set_zero();
    kv.set_zero();
    std::vector<double> rhs_r(disc.num_scalar(), 0.0), rhs_i(disc.num_scalar(), 0.0);
    std::vector<double> rhs_a(disc.num_vector(), 0.0);

    for (int e = 0; e < nt; ++e) {
        const auto& geom = disc.geometry(e);
        const auto& edges = disc.mesh().triangle_edges(e);
        const auto vd = disc.p1().dofs(e);
        const auto ed = disc.nedelec().dofs(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto p = eval_p1(geom, rule.points[q]);
            const auto n = eval_nedelec(geom, edges, rule.points[q]);
            const double w = 2.0 * geom.area * rule.weights[q];
            const Vec2 x = geom.map(rule.points[q]);

            const Vec2 a0 = data.a0(x);
            const double curl_a0 = data.curl_a0 ? data.curl_a0(x) : fd_curl(data.a0, x);
            const std::complex<double> psi0 = data.psi0(x);
            const auto grad = data.grad_psi0 ? data.grad_psi0(x) : fd_grad(data.psi0, x);
            const Vec2 grad_r{grad[0].real(), grad[1].real()};
            const Vec2 grad_i{grad[0].imag(), grad[1].imag()};

            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    ks.add(vd[i], vd[j], w * (p.value[i] * p.value[j] + dot(p.grad[i], p.grad[j])));
                }
                rhs_r[vd[i]] += w * (psi0.real() * p.value[i] + dot(grad_r, p.grad[i]));
                rhs_i[vd[i]] += w * (psi0.imag() * p.value[i] + dot(grad_i, p.grad[i]));
            }
            for (int i = 0; i < 6; ++i) {
                for (int j = 0; j < 6; ++j) {
                    kv.add(ed[i], ed[j], w * (dot(n.value[i], n.value[j]) + n.curl[i] * n.curl[j]));
                }
                rhs_a[ed[i]] += w * (dot(a0, n.value[i]) + curl_a0 * n.curl[i]);
            }
        }
    }

    const FactorizedSpd fs = factorize_spd(ks);
    const FactorizedSpd fv = factorize_spd(kv);
    State s{fv.solve(rhs_a), fs.solve(rhs_r), fs.solve(rhs_i)};
    disc.check(s);
    return s;
}

std::vector<std::vector<Vec2>> supercurrent(const Discretization& disc, const State& state,
                                            const Params& params, const QuadratureRule& rule)
{
    disc.check(state);
    const double ik = 1.0 / params.kappa;
    const int nt = static_cast<int>(disc.mesh().num_triangles());
    std::vector<std::vector<Vec2>> out(nt);
    for (int e = 0; e < nt; ++e) {
        const auto l = gather(disc, state, e);
        out[e].reserve(rule.size());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            auto d = basis_at(disc, e, rule.points[q]);
            evaluate_fields(l, d);
            const double rho = d.pr * d.pr + d.pi * d.pi;
            out[e].push_back(ik * (d.pr * d.gpi - d.pi * d.gpr) - rho * d.a);
        }
    }
    return out;
}

std::vector<Vec2> supercurrent_average(const Discretization& disc, const State& state,
                                       const Params& params)
{
    const auto js = supercurrent(disc, state, params, disc.rule());
    std::vector<Vec2> avg(js.size());
    for (std::size_t e = 0; e < js.size(); ++e) {
        Vec2 s;
        // Weights sum to 1/2 on the reference triangle.
        for (std::size_t q = 0; q < js[e].size(); ++q) s += 2.0 * disc.rule().weights[q] * js[e][q];
        avg[e] = s;
    }
    return avg;
}

std::vector<double> curl_field(const Discretization& disc, const State& state)
{
    disc.check(state);
    const int nt = static_cast<int>(disc.mesh().num_triangles());
    std::vector<double> out(nt);
    for (int e = 0; e < nt; ++e) {
        const auto l = gather(disc, state, e);
        auto d = basis_at(disc, e, {1.0 / 3, 1.0 / 3, 1.0 / 3});
        evaluate_fields(l, d);
        out[e] = d.curl_a;
    }
    return out;
}

double max_abs_psi(const State& state)
{
    double m = 0.0;
    for (std::size_t i = 0; i < state.psi_r.size(); ++i) {
        m = std::max(m, std::hypot(state.psi_r[i], state.psi_i[i]));
    }
    return m;
}

}  // namespace tdgl
