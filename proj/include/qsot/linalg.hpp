#ifndef QSOT_LINALG_HPP
#define QSOT_LINALG_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsot {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Thrown on contract violations (dimension mismatch, invalid inputs).
/// The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Default tolerances. Structural predicates (Hermiticity, CPTP, marginals)
// use kTolStructural; anything routed through an eigensolver relaxes to kTolEig.
inline constexpr double kTolStructural = 1e-10;
inline constexpr double kTolEig = 1e-9;

/// Ordered local Hilbert-space dimensions of a multipartite system.
/// Flat index convention is row-major with the leftmost factor most
/// significant: |i_0 i_1 ... i_n> -> sum_k i_k * prod_{l>k} d_l.
struct SystemDims {
    std::vector<int> dims;

    SystemDims() = default;
    SystemDims(std::initializer_list<int> d) : dims(d) { validate(); }
    explicit SystemDims(std::vector<int> d) : dims(std::move(d)) { validate(); }

    int count() const { return static_cast<int>(dims.size()); }
    int total() const;
    int dim(int k) const { return dims.at(static_cast<size_t>(k)); }

    /// Product of the dimensions strictly after factor k (the stride of i_k).
    int stride(int k) const;

    SystemDims subset(const std::vector<int>& keep) const;
    SystemDims concat(const SystemDims& other) const;

    bool operator==(const SystemDims&) const = default;
    std::string to_string() const;

private:
    void validate() const;
};

/// Dense complex square operator over a labeled tensor-factor structure.
/// Immutable after construction; all operations below are pure functions.
class Operator {
public:
    Operator(SystemDims dims, Matrix entries);

    static Operator identity(SystemDims dims);
    static Operator zero(SystemDims dims);

    const SystemDims& dims() const { return dims_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    Complex trace() const { return m_.trace(); }
    double hermitian_defect() const;
    bool is_hermitian(double tol = kTolStructural) const { return hermitian_defect() <= tol; }
    bool is_psd(double tol = kTolStructural) const;

    /// Same entries, re-labeled as a single tensor factor.
    Operator flattened() const { return Operator(SystemDims{dim()}, m_); }

private:
    SystemDims dims_;
    Matrix m_;
};

/// Largest entrywise modulus of a - b (the max-entry norm used everywhere
/// for operator equality checks).
double max_abs_diff(const Operator& a, const Operator& b);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Kronecker product; a's factors precede b's, dims concatenated.
Operator tensor(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Trace over the complement of `keep` (subsystem indices, ascending order
/// preserved). Total trace is preserved.
Operator partial_trace(const Operator& m, const std::vector<int>& keep);

/// SWAP = sum_ij E_ij (x) E_ji on two d-dimensional factors.
Operator swap_operator(int d);

/// ab + ba.
Operator anticommutator(const Operator& a, const Operator& b);

/// Real eigenvalues of a Hermitian operator, descending. Throws if the
/// Hermiticity defect exceeds tol.
std::vector<double> hermitian_spectrum(const Operator& m, double tol = kTolStructural);

/// PSD square root via spectral decomposition; eigenvalues in [-tol, 0] are
/// clamped to 0, anything below -tol throws.
Operator psd_sqrt(const Operator& m, double tol = kTolStructural);

/// Linear map on operators, represented by its matrix in the E_ij basis.
/// Vectorization is row-major: vec(X)[i*d + j] = X(i, j).
class OperatorMap {
public:
    OperatorMap(SystemDims in, SystemDims out, Matrix m);

    static OperatorMap identity(SystemDims dims);

    /// Build column-by-column from the action on basis elements E_ij.
    template <typename F>
    static OperatorMap from_action(SystemDims in, SystemDims out, F&& action) {
        const int di = in.total(), dout = out.total();
        Matrix m(dout * dout, di * di);
        Matrix basis = Matrix::Zero(di, di);
        for (int i = 0; i < di; ++i) {
            for (int j = 0; j < di; ++j) {
                basis(i, j) = 1.0;
                m.col(i * di + j) = vectorize(action(basis));
                basis(i, j) = 0.0;
            }
        }
        return OperatorMap(std::move(in), std::move(out), std::move(m));
    }

    const SystemDims& in_dims() const { return in_; }
    const SystemDims& out_dims() const { return out_; }
    const Matrix& matrix() const { return m_; }

    Operator apply(const Operator& x) const;
    Matrix apply_matrix(const Matrix& x) const;

    /// this . other (apply `other` first).
    OperatorMap compose(const OperatorMap& other) const;

    static Matrix vectorize(const Matrix& x);
    static Matrix devectorize(const Eigen::VectorXcd& v, int rows);

private:
    SystemDims in_, out_;
    Matrix m_;
};

OperatorMap operator*(Complex scale, const OperatorMap& m);
OperatorMap operator+(const OperatorMap& a, const OperatorMap& b);
OperatorMap operator-(const OperatorMap& a, const OperatorMap& b);

/// Apply `map` to the first tensor factor of q: q = sum_ij E_ij (x) B_ij
/// becomes sum_ij map(E_ij) (x) B_ij. map.in_dims must be the single first
/// factor of q; its out_dims replace that factor.
Operator apply_on_first(const OperatorMap& map, const Operator& q);

/// Apply `map` to the last tensor factor of q, identity on the rest.
Operator apply_on_last(const OperatorMap& map, const Operator& q);

}  // namespace qsot

#endif
