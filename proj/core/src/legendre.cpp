#include "starfode/legendre.hpp"

#include "starfode/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starfode {

namespace {

// Packed index for sorted j <= k <= l.
inline Eigen::Index tet_index(int j, int k, int l) {
    return static_cast<Eigen::Index>(l) * (l + 1) * (l + 2) / 6 +
           static_cast<Eigen::Index>(k) * (k + 1) / 2 + j;
}

// Legendre triple products vanish unless j+k+l is even and the three
// degrees satisfy the triangle inequality.
inline bool triple_admissible(int j, int k, int l) {
    if ((j + k + l) % 2 != 0) return false;
    return l <= j + k; // with j <= k <= l the other two inequalities are free
}

} // namespace

double TripleTensor::operator()(int j, int k, int l) const {
    if (j > k) std::swap(j, k);
    if (k > l) std::swap(k, l);
    if (j > k) std::swap(j, k);
    return values_[tet_index(j, k, l)];
}

Basis make_basis(double T, int m) {
    if (!(T > 0.0)) throw std::invalid_argument("make_basis: T must be positive");
    if (m < 1) throw std::invalid_argument("make_basis: m must be at least 1");
    return Basis{T, m};
}

Eigen::VectorXd eval_basis(const Basis& basis, double t) {
    if (t < 0.0 || t > basis.T)
        throw std::domain_error("eval_basis: t outside [0, T]");
    Eigen::VectorXd phi(basis.m);
    const double x = 2.0 * t / basis.T - 1.0;
    double pkm1 = 1.0, pk = x;
    for (int k = 0; k < basis.m; ++k) {
        double pval;
        if (k == 0) pval = 1.0;
        else if (k == 1) pval = x;
        else {
            // P_k = ((2k-1) x P_{k-1} - (k-1) P_{k-2}) / k
            pval = ((2.0 * k - 1.0) * x * pk - (k - 1.0) * pkm1) / k;
            pkm1 = pk;
            pk = pval;
        }
        phi[k] = std::sqrt((2.0 * k + 1.0) / basis.T) * pval;
    }
    return phi;
}

Eigen::MatrixXd eval_basis_matrix(const Basis& basis, const Eigen::VectorXd& t) {
    Eigen::MatrixXd out(t.size(), basis.m);
    for (Eigen::Index i = 0; i < t.size(); ++i)
        out.row(i) = eval_basis(basis, t[i]).transpose();
    return out;
}

Quadrature gauss_legendre(int n, double T) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    if (!(T > 0.0)) throw std::invalid_argument("gauss_legendre: T must be positive");

    Eigen::VectorXd x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi-style initial guess for the i-th root of P_n on [-1, 1].
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // Map from [-1, 1] to [0, T].
        x[i] = 0.5 * T * (1.0 - z);
        x[n - 1 - i] = 0.5 * T * (1.0 + z);
        const double weight = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = 0.5 * T * weight;
        w[n - 1 - i] = w[i];
    }
    return Quadrature{std::move(x), std::move(w)};
}

namespace {

Eigen::VectorXd project_on_rule(const Basis& basis,
                                const std::function<double(double)>& f,
                                const Eigen::VectorXd& nodes,
                                const Eigen::VectorXd& weights) {
    Eigen::VectorXd fw(nodes.size());
    for (Eigen::Index i = 0; i < nodes.size(); ++i)
        fw[i] = weights[i] * f(nodes[i]);
    return eval_basis_matrix(basis, nodes).transpose() * fw;
}

// Gauss-Legendre rule on dyadic panels graded towards t = 0, where fractional
// forcing terms carry algebraic singularities that defeat a single rule.
Quadrature graded_rule(int per_panel, double T) {
    constexpr int kPanels = 48;
    std::vector<double> nodes, weights;
    nodes.reserve(per_panel * (kPanels + 1));
    weights.reserve(per_panel * (kPanels + 1));
    double right = T;
    for (int p = 0; p < kPanels; ++p) {
        const double left = (p + 1 < kPanels) ? 0.5 * right : 0.0;
        const Quadrature q = gauss_legendre(per_panel, right - left);
        for (int i = 0; i < per_panel; ++i) {
            nodes.push_back(left + q.nodes[i]);
            weights.push_back(q.weights[i]);
        }
        right = left;
    }
    Quadrature out;
    out.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), nodes.size());
    out.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), weights.size());
    return out;
}

} // namespace

ExpansionCoeffs expand_function(const Basis& basis,
                                const std::function<double(double)>& f,
                                double tol) {
    constexpr int kNodeCap = 1 << 14;
    int n = std::max(2 * basis.m, 32);
    Eigen::VectorXd prev;
    double residual = 0.0;
    while (n <= kNodeCap) {
        const Quadrature q = gauss_legendre(n, basis.T);
        Eigen::VectorXd beta = project_on_rule(basis, f, q.nodes, q.weights);
        if (prev.size() > 0) {
            residual = (beta - prev).cwiseAbs().maxCoeff();
            if (residual <= tol) return ExpansionCoeffs{std::move(beta), residual};
        }
        prev = std::move(beta);
        n *= 2;
    }

    // Graded composite fallback for integrands singular at t = 0.
    prev.resize(0);
    const int panel_cap = 8 * std::max(basis.m, 16);
    for (int per_panel = std::max(basis.m, 16); per_panel <= panel_cap;
         per_panel *= 2) {
        const Quadrature q = graded_rule(per_panel, basis.T);
        Eigen::VectorXd beta = project_on_rule(basis, f, q.nodes, q.weights);
        if (prev.size() > 0) {
            residual = (beta - prev).cwiseAbs().maxCoeff();
            if (residual <= tol) return ExpansionCoeffs{std::move(beta), residual};
        }
        prev = std::move(beta);
    }
    throw accuracy_error("expand_function: node-doubling did not converge", residual);
}

TripleTensor triple_products(const Basis& basis) {
    const int m = basis.m;
    // Exact for the degree-3(m-1) integrand.
    const int n = (3 * (m - 1) + 1 + 1) / 2 + 1;
    const Quadrature q = gauss_legendre(n, basis.T);
    const Eigen::MatrixXd phi = eval_basis_matrix(basis, q.nodes); // n x m

    Eigen::VectorXd packed = Eigen::VectorXd::Zero(tet_index(m - 1, m - 1, m - 1) + 1);
    Eigen::VectorXd pkl(n);
    for (int l = 0; l < m; ++l) {
        for (int k = 0; k <= l; ++k) {
            pkl = q.weights.cwiseProduct(phi.col(k)).cwiseProduct(phi.col(l));
            for (int j = 0; j <= k; ++j) {
                if (!triple_admissible(j, k, l)) continue;
                packed[tet_index(j, k, l)] = pkl.dot(phi.col(j));
            }
        }
    }
    return TripleTensor(m, std::move(packed));
}

} // namespace starfode
