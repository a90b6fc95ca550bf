#include "qsot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qsot {

/*
 * SystemDims
 */

void SystemDims::validate() const {
    if (dims.empty()) throw ValidationError("SystemDims: empty dimension list");
    for (int d : dims)
        if (d < 1) throw ValidationError("SystemDims: every local dimension must be >= 1");
}

int SystemDims::total() const {
    int t = 1;
    for (int d : dims) t *= d;
    return t;
}

int SystemDims::stride(int k) const {
    int s = 1;
    for (size_t l = static_cast<size_t>(k) + 1; l < dims.size(); ++l) s *= dims[l];
    return s;
}

SystemDims SystemDims::subset(const std::vector<int>& keep) const {
    std::vector<int> d;
    d.reserve(keep.size());
    for (int k : keep) d.push_back(dim(k));
    return SystemDims(std::move(d));
}

SystemDims SystemDims::concat(const SystemDims& other) const {
    std::vector<int> d = dims;
    d.insert(d.end(), other.dims.begin(), other.dims.end());
    return SystemDims(std::move(d));
}

std::string SystemDims::to_string() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
    os << "]";
    return os.str();
}

/*
 * Operator
 */

Operator::Operator(SystemDims dims, Matrix entries) : dims_(std::move(dims)), m_(std::move(entries)) {
    if (m_.rows() != m_.cols())
        throw ValidationError("Operator: matrix must be square");
    if (m_.rows() != dims_.total())
        throw ValidationError("Operator: matrix size " + std::to_string(m_.rows()) +
                              " does not match dims " + dims_.to_string());
}

Operator Operator::identity(SystemDims dims) {
    const int d = dims.total();
    return Operator(std::move(dims), Matrix::Identity(d, d));
}

Operator Operator::zero(SystemDims dims) {
    const int d = dims.total();
    return Operator(std::move(dims), Matrix::Zero(d, d));
}

double Operator::hermitian_defect() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_psd(double tol) const {
    if (!is_hermitian(tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("max_abs_diff: shape mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Operator& a, const Operator& b) {
    return max_abs_diff(a.matrix(), b.matrix());
}

/*
 * Tensor algebra
 */

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Operator tensor(const Operator& a, const Operator& b) {
    return Operator(a.dims().concat(b.dims()), kron(a.matrix(), b.matrix()));
}

namespace {

// Mixed-radix decomposition of a flat index, leftmost factor most significant.
void decode_index(int flat, const std::vector<int>& dims, std::vector<int>& out) {
    out.resize(dims.size());
    for (size_t k = dims.size(); k-- > 0;) {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
}

int encode_index(const std::vector<int>& idx, const std::vector<int>& dims) {
    int flat = 0;
    for (size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
    return flat;
}

}  // namespace

Operator partial_trace(const Operator& m, const std::vector<int>& keep) {
    const auto& dims = m.dims().dims;
    const int n = static_cast<int>(dims.size());

    std::vector<bool> kept(static_cast<size_t>(n), false);
    for (int k : keep) {
        if (k < 0 || k >= n)
            throw ValidationError("partial_trace: subsystem index " + std::to_string(k) +
                                  " out of range for dims " + m.dims().to_string());
        if (kept[static_cast<size_t>(k)])
            throw ValidationError("partial_trace: duplicate subsystem index");
        kept[static_cast<size_t>(k)] = true;
    }
    std::vector<int> keep_sorted, traced;
    for (int k = 0; k < n; ++k) (kept[static_cast<size_t>(k)] ? keep_sorted : traced).push_back(k);
    if (keep_sorted.empty()) throw ValidationError("partial_trace: keep set must be nonempty");

    SystemDims out_dims = m.dims().subset(keep_sorted);
    std::vector<int> kdims, tdims;
    for (int k : keep_sorted) kdims.push_back(dims[static_cast<size_t>(k)]);
    for (int t : traced) tdims.push_back(dims[static_cast<size_t>(t)]);
    const int kd = out_dims.total();
    int td = 1;
    for (int d : tdims) td *= d;

    Matrix out = Matrix::Zero(kd, kd);
    std::vector<int> kr, kc, ti, full_r(static_cast<size_t>(n)), full_c(static_cast<size_t>(n));
    for (int r = 0; r < kd; ++r) {
        decode_index(r, kdims, kr);
        for (int c = 0; c < kd; ++c) {
            decode_index(c, kdims, kc);
            Complex acc = 0.0;
            for (int t = 0; t < td; ++t) {
                decode_index(t, tdims, ti);
                for (size_t a = 0; a < keep_sorted.size(); ++a) {
                    full_r[static_cast<size_t>(keep_sorted[a])] = kr[a];
                    full_c[static_cast<size_t>(keep_sorted[a])] = kc[a];
                }
                for (size_t a = 0; a < traced.size(); ++a) {
                    full_r[static_cast<size_t>(traced[a])] = ti[a];
                    full_c[static_cast<size_t>(traced[a])] = ti[a];
                }
                acc += m.matrix()(encode_index(full_r, dims), encode_index(full_c, dims));
            }
            out(r, c) = acc;
        }
    }
    return Operator(std::move(out_dims), std::move(out));
}

Operator swap_operator(int d) {
    if (d < 1) throw ValidationError("swap_operator: dimension must be >= 1");
    Matrix s = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
    return Operator(SystemDims{d, d}, std::move(s));
}

Operator anticommutator(const Operator& a, const Operator& b) {
    if (a.dims() != b.dims())
        throw ValidationError("anticommutator: dims mismatch " + a.dims().to_string() + " vs " +
                              b.dims().to_string());
    return Operator(a.dims(), a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

std::vector<double> hermitian_spectrum(const Operator& m, double tol) {
    if (!m.is_hermitian(tol))
        throw ValidationError("hermitian_spectrum: input not Hermitian (defect " +
                              std::to_string(m.hermitian_defect()) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix(), Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

Operator psd_sqrt(const Operator& m, double tol) {
    if (!m.is_hermitian(tol))
        throw ValidationError("psd_sqrt: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol)
            throw ValidationError("psd_sqrt: negative eigenvalue " + std::to_string(ev(i)) +
                                  " below -tol");
        if (ev(i) < 0.0) ev(i) = 0.0;  // clamp [-tol, 0] to 0
    }
    Matrix s = es.eigenvectors() * ev.cwiseSqrt().asDiagonal().toDenseMatrix().cast<Complex>() *
               es.eigenvectors().adjoint();
    return Operator(m.dims(), std::move(s));
}

/*
 * OperatorMap
 */

OperatorMap::OperatorMap(SystemDims in, SystemDims out, Matrix m)
    : in_(std::move(in)), out_(std::move(out)), m_(std::move(m)) {
    const int di = in_.total(), dout = out_.total();
    if (m_.rows() != dout * dout || m_.cols() != di * di)
        throw ValidationError("OperatorMap: matrix must be (out^2) x (in^2)");
}

OperatorMap OperatorMap::identity(SystemDims dims) {
    const int d = dims.total();
    return OperatorMap(dims, dims, Matrix::Identity(d * d, d * d));
}

Matrix OperatorMap::vectorize(const Matrix& x) {
    Matrix v(x.rows() * x.cols(), 1);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j, 0) = x(i, j);
    return v;
}

Matrix OperatorMap::devectorize(const Eigen::VectorXcd& v, int rows) {
    Matrix x(rows, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) x(i, j) = v(i * rows + j);
    return x;
}

Matrix OperatorMap::apply_matrix(const Matrix& x) const {
    const int di = in_.total();
    if (x.rows() != di || x.cols() != di)
        throw ValidationError("OperatorMap::apply: operand size mismatch");
    Eigen::VectorXcd y = m_ * vectorize(x);
    return devectorize(y, out_.total());
}

Operator OperatorMap::apply(const Operator& x) const {
    if (x.dims().total() != in_.total())
        throw ValidationError("OperatorMap::apply: dims mismatch");
    return Operator(out_, apply_matrix(x.matrix()));
}

OperatorMap OperatorMap::compose(const OperatorMap& other) const {
    if (other.out_.total() != in_.total())
        throw ValidationError("OperatorMap::compose: dims mismatch");
    return OperatorMap(other.in_, out_, m_ * other.m_);
}

OperatorMap operator*(Complex scale, const OperatorMap& m) {
    return OperatorMap(m.in_dims(), m.out_dims(), scale * m.matrix());
}

OperatorMap operator+(const OperatorMap& a, const OperatorMap& b) {
    if (a.in_dims().total() != b.in_dims().total() || a.out_dims().total() != b.out_dims().total())
        throw ValidationError("OperatorMap sum: dims mismatch");
    return OperatorMap(a.in_dims(), a.out_dims(), a.matrix() + b.matrix());
}

OperatorMap operator-(const OperatorMap& a, const OperatorMap& b) {
    return a + (Complex(-1.0) * b);
}

Operator apply_on_first(const OperatorMap& map, const Operator& q) {
    const auto& dims = q.dims().dims;
    if (dims.empty() || map.in_dims().total() != dims.front())
        throw ValidationError("apply_on_first: map input must match first factor");
    const int d = dims.front();
    int rest = 1;
    for (size_t k = 1; k < dims.size(); ++k) rest *= dims[k];
    const int dout = map.out_dims().total();

    // q = sum_ij E_ij (x) B_ij with B_ij the (i,j) block of size rest x rest.
    Matrix out = Matrix::Zero(dout * rest, dout * rest);
    Matrix basis = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            basis(i, j) = 1.0;
            Matrix mapped = map.apply_matrix(basis);
            basis(i, j) = 0.0;
            const auto block = q.matrix().block(i * rest, j * rest, rest, rest);
            if (block.cwiseAbs().maxCoeff() == 0.0) continue;
            for (int r = 0; r < dout; ++r)
                for (int c = 0; c < dout; ++c)
                    if (mapped(r, c) != Complex(0.0))
                        out.block(r * rest, c * rest, rest, rest) += mapped(r, c) * block;
        }
    }
    SystemDims out_dims = map.out_dims();
    for (size_t k = 1; k < dims.size(); ++k) out_dims = out_dims.concat(SystemDims{dims[k]});
    return Operator(std::move(out_dims), std::move(out));
}

Operator apply_on_last(const OperatorMap& map, const Operator& q) {
    const auto& dims = q.dims().dims;
    if (dims.empty() || map.in_dims().total() != dims.back())
        throw ValidationError("apply_on_last: map input must match last factor");
    const int d = dims.back();
    int lead = 1;
    for (size_t k = 0; k + 1 < dims.size(); ++k) lead *= dims[k];
    const int dout = map.out_dims().total();

    Matrix out(lead * dout, lead * dout);
    for (int I = 0; I < lead; ++I)
        for (int J = 0; J < lead; ++J)
            out.block(I * dout, J * dout, dout, dout) =
                map.apply_matrix(q.matrix().block(I * d, J * d, d, d));

    SystemDims out_dims{dims.front()};
    if (dims.size() == 1) {
        out_dims = map.out_dims();
    } else {
        std::vector<int> lead_dims(dims.begin(), dims.end() - 1);
        out_dims = SystemDims(std::move(lead_dims)).concat(map.out_dims());
    }
    return Operator(std::move(out_dims), std::move(out));
}

}  // namespace qsot
