#include "degroot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "degroot/rng.hpp"

namespace degroot {

namespace {

constexpr double kPiTol = 1e-10;
constexpr long kPiIterCap = 1000000;
constexpr int kDenseLimit = 2000;
constexpr double kEigTol = 1e-8;

double stationary_residual(const TransitionMatrix& p, const std::vector<double>& pi) {
    std::vector<double> out;
    p.apply_transpose(pi, out);
    double r = 0.0;
    for (int v = 0; v < p.size(); ++v) r = std::max(r, std::abs(out[v] - pi[v]));
    return r;
}

bool rows_are_srw(const TransitionMatrix& p, bool allow_constant_self_loop, double* delta_out) {
    const int n = p.size();
    double delta = -1.0;
    for (int v = 0; v < n; ++v) {
        double self = 0.0;
        int others = 0;
        double q = -1.0;
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            if (a->to == v) {
                self = a->p;
                continue;
            }
            ++others;
            if (q < 0)
                q = a->p;
            else if (std::abs(a->p - q) > 1e-14)
                return false;
        }
        if (others == 0) return false;
        if (self > 0 && !allow_constant_self_loop) return false;
        if (delta < 0)
            delta = self;
        else if (std::abs(self - delta) > 1e-14)
            return false;
        if (std::abs(q * others + self - 1.0) > 1e-12) return false;
    }
    if (delta_out) *delta_out = delta;
    return true;
}

std::vector<double> try_closed_form_pi(const TransitionMatrix& p) {
    const int n = p.size();
    // SRW / lazy SRW on a graph with symmetric support: pi ~ degree
    double delta = 0.0;
    if (rows_are_srw(p, true, &delta)) {
        std::vector<double> pi(n, 0.0);
        double tot = 0.0;
        for (int v = 0; v < n; ++v) {
            int d = 0;
            for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
                if (a->to != v) ++d;
            pi[v] = static_cast<double>(d);
            tot += pi[v];
        }
        for (auto& x : pi) x /= tot;
        if (stationary_residual(p, pi) <= kPiTol) return pi;
        // non-symmetric support (e.g. Eulerian digraph) lands here; the degree
        // guess is still right when indeg == outdeg
    }
    return {};
}

std::vector<double> dense_solve_pi(const TransitionMatrix& p) {
    const int n = p.size();
    // (P^T - I) x = 0 with the last equation replaced by sum(x) = 1
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v)
        for (const Arc* arc = p.row_begin(v); arc != p.row_end(v); ++arc) a(arc->to, v) += arc->p;
    a -= Eigen::MatrixXd::Identity(n, n);
    for (int c = 0; c < n; ++c) a(n - 1, c) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd x = a.partialPivLu().solve(b);
    return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace

StationaryDistribution stationary(const TransitionMatrix& p) {
    const int n = p.size();
    StationaryDistribution out;

    std::vector<double> pi = try_closed_form_pi(p);
    if (pi.empty() && n <= kDenseLimit) {
        pi = dense_solve_pi(p);
        if (stationary_residual(p, pi) > kPiTol) pi.clear();
    }
    if (pi.empty()) {
        // damped power iteration: x <- (x + xP)/2 shares the fixed point and is
        // aperiodic, which tames bipartite and cyclic chains
        pi.assign(n, 1.0 / n);
        std::vector<double> next;
        long it = 0;
        for (; it < kPiIterCap; ++it) {
            p.apply_transpose(pi, next);
            double norm = 0.0;
            for (int v = 0; v < n; ++v) {
                next[v] = 0.5 * (next[v] + pi[v]);
                norm += next[v];
            }
            double diff = 0.0;
            for (int v = 0; v < n; ++v) {
                next[v] /= norm;
                diff = std::max(diff, std::abs(next[v] - pi[v]));
            }
            pi.swap(next);
            if (diff < kPiTol * 0.5 && stationary_residual(p, pi) <= kPiTol) break;
        }
        out.iterations = it;
        if (it >= kPiIterCap)
            throw std::runtime_error("stationary: no convergence (reducible or ill-conditioned chain)");
    }

    double sum = 0.0;
    for (double x : pi) sum += x;
    for (auto& x : pi) x /= sum;
    out.pi_min = *std::min_element(pi.begin(), pi.end());
    out.pi_max = *std::max_element(pi.begin(), pi.end());
    if (out.pi_min <= 0.0)
        throw std::runtime_error("stationary: nonpositive entry (matrix not irreducible?)");
    out.residual = stationary_residual(p, pi);
    if (out.residual > kPiTol)
        throw std::runtime_error("stationary: residual above tolerance");
    out.pi = std::move(pi);
    return out;
}

TransitionMatrix reversal(const TransitionMatrix& p, const std::vector<double>& pi) {
    const int n = p.size();
    std::vector<std::vector<Arc>> rows(n);
    for (int v = 0; v < n; ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            rows[a->to].push_back({v, pi[v] * a->p / pi[a->to]});
    return TransitionMatrix::from_rows(rows);
}

TransitionMatrix symmetrize(const TransitionMatrix& p, const std::vector<double>& pi) {
    const TransitionMatrix rev = reversal(p, pi);
    const int n = p.size();
    std::vector<std::vector<Arc>> rows(n);
    for (int v = 0; v < n; ++v) {
        // merge the two sorted rows
        const Arc* a = p.row_begin(v);
        const Arc* ae = p.row_end(v);
        const Arc* b = rev.row_begin(v);
        const Arc* be = rev.row_end(v);
        while (a != ae || b != be) {
            if (b == be || (a != ae && a->to < b->to)) {
                rows[v].push_back({a->to, 0.5 * a->p});
                ++a;
            } else if (a == ae || b->to < a->to) {
                rows[v].push_back({b->to, 0.5 * b->p});
                ++b;
            } else {
                rows[v].push_back({a->to, 0.5 * (a->p + b->p)});
                ++a;
                ++b;
            }
        }
    }
    return TransitionMatrix::from_rows(rows);
}

TransitionMatrix star_product(const TransitionMatrix& p, const std::vector<double>& pi) {
    const TransitionMatrix rev = reversal(p, pi);
    const int n = p.size();
    std::vector<std::vector<Arc>> rows(n);
    std::vector<double> acc(n, 0.0);
    std::vector<int> touched;
    for (int v = 0; v < n; ++v) {
        touched.clear();
        for (const Arc* a = rev.row_begin(v); a != rev.row_end(v); ++a)
            for (const Arc* b = p.row_begin(a->to); b != p.row_end(a->to); ++b) {
                if (acc[b->to] == 0.0) touched.push_back(b->to);
                acc[b->to] += a->p * b->p;
            }
        rows[v].reserve(touched.size());
        for (int w : touched) {
            rows[v].push_back({w, acc[w]});
            acc[w] = 0.0;
        }
    }
    return TransitionMatrix::from_rows(rows);
}

namespace {

// x -> D^{1/2} P D^{-1/2} x and its transpose, sharing scratch
struct SimilarityOp {
    const TransitionMatrix& p;
    std::vector<double> sqrt_pi;
    std::vector<double> inv_sqrt_pi;
    mutable std::vector<double> scratch;

    SimilarityOp(const TransitionMatrix& pm, const std::vector<double>& pi)
        : p(pm), sqrt_pi(pi.size()), inv_sqrt_pi(pi.size()) {
        for (std::size_t v = 0; v < pi.size(); ++v) {
            sqrt_pi[v] = std::sqrt(pi[v]);
            inv_sqrt_pi[v] = 1.0 / sqrt_pi[v];
        }
    }

    void apply_a(const std::vector<double>& x, std::vector<double>& y) const {
        scratch.resize(x.size());
        for (std::size_t v = 0; v < x.size(); ++v) scratch[v] = x[v] * inv_sqrt_pi[v];
        p.apply(scratch, y);
        for (std::size_t v = 0; v < x.size(); ++v) y[v] *= sqrt_pi[v];
    }

    void apply_at(const std::vector<double>& x, std::vector<double>& y) const {
        scratch.resize(x.size());
        for (std::size_t v = 0; v < x.size(); ++v) scratch[v] = x[v] * sqrt_pi[v];
        p.apply_transpose(scratch, y);
        for (std::size_t v = 0; v < x.size(); ++v) y[v] *= inv_sqrt_pi[v];
    }

    // (A + A^T)/2, the symmetrized chain in similarity coordinates
    void apply_sym(const std::vector<double>& x, std::vector<double>& y) const {
        std::vector<double> t;
        apply_a(x, y);
        apply_at(x, t);
        for (std::size_t v = 0; v < x.size(); ++v) y[v] = 0.5 * (y[v] + t[v]);
    }

    // A^T A, the star-product chain in similarity coordinates
    void apply_sq(const std::vector<double>& x, std::vector<double>& y) const {
        std::vector<double> t;
        apply_a(x, t);
        apply_at(t, y);
    }
};

struct EigPair {
    double value = 0.0;
    std::vector<double> vector;
};

// Largest algebraic eigenvalue orthogonal to the known top eigenvector u0
// (eigenvalue 1), dense path. Shifting u0's eigenvalue to -1 keeps degenerate
// eigenspaces honest: the max of the shifted matrix is exactly lambda2, since
// the spectrum lives in [-1, 1].
EigPair dense_lambda2(const Eigen::MatrixXd& s, const Eigen::VectorXd& u0) {
    Eigen::MatrixXd shifted = s - 2.0 * u0 * u0.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shifted);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    const int n = static_cast<int>(s.rows());
    EigPair out;
    out.value = es.eigenvalues()(n - 1);
    Eigen::VectorXd vec = es.eigenvectors().col(n - 1);
    vec -= u0 * u0.dot(vec);  // strip any u0 leakage from degenerate pairs
    const double norm = vec.norm();
    if (norm > 1e-8) vec /= norm;
    out.vector.assign(vec.data(), vec.data() + n);
    return out;
}

// Lanczos with full reorthogonalization against the basis and the known top
// eigenvector u0. Returns the largest algebraic Ritz value (and vector).
template <typename ApplyFn>
EigPair lanczos_lambda2(int n, const ApplyFn& apply, const std::vector<double>& u0,
                        std::uint64_t seed = 7) {
    const int max_iter = std::min(n, 600);
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;

    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };
    auto orthogonalize = [&](std::vector<double>& v) {
        const double cu = dot(v, u0);
        for (int i = 0; i < n; ++i) v[i] -= cu * u0[i];
        for (const auto& q : basis) {
            const double c = dot(v, q);
            for (int i = 0; i < n; ++i) v[i] -= c * q[i];
        }
    };

    Rng rng(seed);
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) q[i] = rng.unit() - 0.5;
    orthogonalize(q);
    orthogonalize(q);
    double norm = std::sqrt(dot(q, q));
    if (norm < 1e-300) throw std::runtime_error("lanczos: degenerate start vector");
    for (auto& x : q) x /= norm;
    basis.push_back(q);

    std::vector<double> w(n);
    EigPair best;
    for (int k = 0; k < max_iter; ++k) {
        apply(basis[k], w);
        const double a = dot(w, basis[k]);
        alpha.push_back(a);
        orthogonalize(w);
        const double b = std::sqrt(dot(w, w));

        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const int top = m - 1;
        const double theta = es.eigenvalues()(top);
        const double resid = b * std::abs(es.eigenvectors()(m - 1, top));
        if (resid < kEigTol || b < 1e-14) {
            best.value = theta;
            best.vector.assign(n, 0.0);
            for (int j = 0; j < m; ++j) {
                const double c = es.eigenvectors()(j, top);
                for (int i = 0; i < n; ++i) best.vector[i] += c * basis[j][i];
            }
            return best;
        }
        beta.push_back(b);
        for (auto& x : w) x /= b;
        basis.push_back(w);
    }
    throw std::runtime_error("lanczos: no convergence within the iteration cap");
}

EigPair lambda2_of(const TransitionMatrix& p, const std::vector<double>& pi, bool squared) {
    const int n = p.size();
    SimilarityOp op(p, pi);
    std::vector<double> u0(n);
    for (int v = 0; v < n; ++v) u0[v] = op.sqrt_pi[v];

    if (n <= kDenseLimit) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int v = 0; v < n; ++v)
            for (const Arc* arc = p.row_begin(v); arc != p.row_end(v); ++arc)
                a(v, arc->to) = op.sqrt_pi[v] * arc->p * op.inv_sqrt_pi[arc->to];
        Eigen::MatrixXd s = squared ? Eigen::MatrixXd(a.transpose() * a)
                                    : Eigen::MatrixXd(0.5 * (a + a.transpose()));
        Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(u0.data(), n);
        return dense_lambda2(s, u);
    }
    if (squared)
        return lanczos_lambda2(
            n, [&](const std::vector<double>& x, std::vector<double>& y) { op.apply_sq(x, y); }, u0);
    return lanczos_lambda2(
        n, [&](const std::vector<double>& x, std::vector<double>& y) { op.apply_sym(x, y); }, u0);
}

bool detailed_balance(const TransitionMatrix& p, const std::vector<double>& pi) {
    for (int v = 0; v < p.size(); ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a)
            if (std::abs(pi[v] * a->p - pi[a->to] * p.entry(a->to, v)) > 1e-12) return false;
    return true;
}

}  // namespace

SpectralReport spectral_gaps(const TransitionMatrix& p, const StationaryDistribution& pi) {
    SpectralReport rep;
    rep.reversible = detailed_balance(p, pi.pi);
    rep.lambda2_sym = lambda2_of(p, pi.pi, /*squared=*/false).value;
    rep.gamma = 1.0 - rep.lambda2_sym;
    rep.lambda2_pstarp = lambda2_of(p, pi.pi, /*squared=*/true).value;
    rep.gamma_pstarp = 1.0 - rep.lambda2_pstarp;
    // numerically P*P can land a hair above 1 on its flat spectrum
    if (rep.gamma_pstarp < 0 && rep.gamma_pstarp > -1e-9) rep.gamma_pstarp = 0.0;
    rep.gamma_hat = (1.0 - pi.pi_min) * rep.gamma_pstarp + 2.0 * pi.pi_min * rep.gamma;
    return rep;
}

std::vector<double> second_right_eigenvector(const TransitionMatrix& p,
                                             const StationaryDistribution& pi) {
    EigPair pair = lambda2_of(p, pi.pi, /*squared=*/false);
    std::vector<double> g(p.size());
    for (int v = 0; v < p.size(); ++v) g[v] = pair.vector[v] / std::sqrt(pi.pi[v]);
    return g;
}

namespace {

Eigen::MatrixXd grounded_laplacian_inverse(const TransitionMatrix& p) {
    const int n = p.size();
    if (n > kDenseLimit) throw std::invalid_argument("effective resistance: n too large for dense solve");
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v)
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            if (a->to == v) continue;
            if (p.entry(a->to, v) == 0.0)
                throw std::invalid_argument("effective resistance: support is directed");
            l(v, v) += 1.0;
            l(v, a->to) -= 1.0;
        }
    // ground vertex 0
    Eigen::MatrixXd lg = l.bottomRightCorner(n - 1, n - 1);
    Eigen::MatrixXd inv = lg.ldlt().solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
    full.bottomRightCorner(n - 1, n - 1) = inv;
    return full;
}

}  // namespace

double effective_resistance(const TransitionMatrix& p, VertexId v, VertexId w) {
    if (v == w) return 0.0;
    const Eigen::MatrixXd g = grounded_laplacian_inverse(p);
    return g(v, v) + g(w, w) - 2.0 * g(v, w);
}

ResistanceReport r_max(const TransitionMatrix& p, int sample_pairs, std::uint64_t seed) {
    const int n = p.size();
    const Eigen::MatrixXd g = grounded_laplacian_inverse(p);
    ResistanceReport rep;
    auto consider = [&](int v, int w) {
        const double r = g(v, v) + g(w, w) - 2.0 * g(v, w);
        if (r > rep.r_max) {
            rep.r_max = r;
            rep.argmax_v = v;
            rep.argmax_w = w;
        }
    };
    if (n <= 512) {
        for (int v = 0; v < n; ++v)
            for (int w = v + 1; w < n; ++w) consider(v, w);
    } else {
        rep.exhaustive = false;
        Rng rng(seed);
        for (int k = 0; k < sample_pairs; ++k) {
            const int v = static_cast<int>(rng.below(n));
            int w = static_cast<int>(rng.below(n));
            if (w == v) w = (w + 1) % n;
            consider(v, w);
        }
    }
    return rep;
}

std::vector<double> expected_opinions(const TransitionMatrix& p, const std::vector<double>& f0,
                                      double t) {
    if (t < 0) throw std::invalid_argument("expected_opinions: t must be >= 0");
    if (static_cast<int>(f0.size()) != p.size())
        throw std::invalid_argument("expected_opinions: dimension mismatch");
    if (t == 0) return f0;

    constexpr double kTail = 1e-12;
    const double k_cap = t + 12.0 * std::sqrt(t) + 80.0;

    std::vector<double> acc(p.size(), 0.0);
    std::vector<double> v = f0;
    std::vector<double> next;
    const double log_t = std::log(t);
    for (long k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        const double w = std::exp(kd * log_t - t - std::lgamma(kd + 1.0));
        if (w > 0)
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
        // past the mode the remaining Poisson tail is geometrically dominated:
        // sum_{j>k} w_j <= w_k * r/(1-r) with r = t/(k+1)
        if (kd + 1.0 > t) {
            const double r = t / (kd + 1.0);
            if (w * r / (1.0 - r) < kTail) break;
        }
        if (kd > k_cap)
            throw std::runtime_error("expected_opinions: truncation cap hit before tail bound");
        p.apply(v, next);
        v.swap(next);
    }
    return acc;
}

double energy_of(const TransitionMatrix& p, const std::vector<double>& pi,
                 const std::vector<double>& f) {
    double e = 0.0;
    for (int v = 0; v < p.size(); ++v) {
        double row = 0.0;
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            const double d = f[v] - f[a->to];
            row += a->p * d * d;
        }
        e += pi[v] * row;
    }
    return 0.5 * e;
}

OpinionSummary summarize(const TransitionMatrix& p, const std::vector<double>& pi,
                         const std::vector<double>& f) {
    OpinionSummary s;
    double m = 0.0, m2 = 0.0;
    double lo = f[0], hi = f[0];
    for (int v = 0; v < p.size(); ++v) {
        m += pi[v] * f[v];
        m2 += pi[v] * f[v] * f[v];
        lo = std::min(lo, f[v]);
        hi = std::max(hi, f[v]);
    }
    s.mean = m;
    s.var_pi = std::max(0.0, m2 - m * m);
    s.energy = energy_of(p, pi, f);
    s.osc = hi - lo;
    return s;
}

DriftReport drifts(const TransitionMatrix& p, const std::vector<double>& pi,
                   const std::vector<double>& f) {
    const int n = p.size();
    DriftReport rep;

    std::vector<double> pf;
    p.apply(f, pf);

    double ip = 0.0, m2 = 0.0, nrm_pf = 0.0, nrm_f = 0.0;
    for (int v = 0; v < n; ++v) {
        const double d = pf[v] - f[v];
        ip += pi[v] * d * d;
        m2 += pi[v] * pi[v] * d * d;
        nrm_pf += pi[v] * pf[v] * pf[v];
        nrm_f += pi[v] * f[v] * f[v];
    }
    rep.iminusp_norm_sq = ip;
    rep.m2_drift = m2;
    rep.norm_sq_drift = nrm_pf - nrm_f;
    const double pi_min = *std::min_element(pi.begin(), pi.end());
    const double pi_max = *std::max_element(pi.begin(), pi.end());
    rep.m2_lower = pi_min * ip;
    rep.m2_upper = pi_max * ip;

    // energy change from a single ring at v, every v once, via the arcs that
    // touch v in either direction
    std::vector<std::vector<Arc>> in_arcs(n);
    for (int u = 0; u < n; ++u)
        for (const Arc* a = p.row_begin(u); a != p.row_end(u); ++a)
            if (a->to != u) in_arcs[a->to].push_back({u, a->p});

    double total = 0.0;
    for (int v = 0; v < n; ++v) {
        const double g = pf[v];
        double delta = 0.0;
        for (const Arc* a = p.row_begin(v); a != p.row_end(v); ++a) {
            if (a->to == v) continue;
            const double before = f[v] - f[a->to];
            const double after = g - f[a->to];
            delta += pi[v] * a->p * (after * after - before * before);
        }
        for (const Arc& a : in_arcs[v]) {
            const double before = f[a.to] - f[v];
            const double after = f[a.to] - g;
            delta += pi[a.to] * a.p * (after * after - before * before);
        }
        total += 0.5 * delta;
    }
    rep.energy_drift = total;
    return rep;
}

}  // namespace degroot
