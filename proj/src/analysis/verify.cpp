#include "qkdlab/analysis/verify.hpp"

#include "qkdlab/analysis/efficiency.hpp"
#include "qkdlab/protocols/protocol.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace qkdlab {

namespace {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;
using Digits = std::vector<std::size_t>;

// Dense reference evolution. Everything here works on plain vectors and
// full-size matrices; none of it goes through the simulator.

std::size_t total(const Dims& dims) {
    std::size_t n = 1;
    for (auto d : dims) {
        n *= d;
    }
    return n;
}

std::size_t flat(const Dims& dims, const Digits& digits) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        idx = idx * dims[i] + digits[i];
    }
    return idx;
}

Digits unflat(const Dims& dims, std::size_t idx) {
    Digits d(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
        d[i] = idx % dims[i];
        idx /= dims[i];
    }
    return d;
}

Vec ket(const Dims& dims, const Digits& digits) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(total(dims)));
    v(static_cast<Eigen::Index>(flat(dims, digits))) = 1.0;
    return v;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

// |..i..j..> -> |..i..> U(i)|j>
Mat controlled(const Dims& dims, std::size_t c, std::size_t t, const std::function<Mat(std::size_t)>& u) {
    const auto n = total(dims);
    Mat out = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t col = 0; col < n; ++col) {
        auto digits = unflat(dims, col);
        const Mat ui = u(digits[c]);
        const auto in = digits[t];
        for (std::size_t o = 0; o < dims[t]; ++o) {
            digits[t] = o;
            out(static_cast<Eigen::Index>(flat(dims, digits)), static_cast<Eigen::Index>(col)) =
                ui(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(in));
        }
    }
    return out;
}

Mat shift(std::size_t d, long long k) {
    Mat m = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const auto dd = static_cast<long long>(d);
    for (long long j = 0; j < dd; ++j) {
        m(((j + k) % dd + dd) % dd, j) = 1.0;
    }
    return m;
}

Mat dense_hadamard(std::size_t d, bool conj) {
    Mat m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const double sign = conj ? -1.0 : 1.0;
    for (std::size_t l = 0; l < d; ++l) {
        for (std::size_t k = 0; k < d; ++k) {
            const double phase = sign * 2.0 * std::numbers::pi * static_cast<double>(k * l) / static_cast<double>(d);
            m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) =
                std::polar(1.0 / std::sqrt(static_cast<double>(d)), phase);
        }
    }
    return m;
}

Mat dense_rotation(double t) {
    Mat m(2, 2);
    m << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    return m;
}

Mat power(const Mat& u, std::size_t i) {
    Mat out = Mat::Identity(u.rows(), u.cols());
    for (std::size_t k = 0; k < i; ++k) {
        out = u * out;
    }
    return out;
}

Vec normalized(Vec v) { return v / v.norm(); }

// Slice of v with subsystem `pos` fixed to `value`, renormalized.
Vec slice(const Dims& dims, std::size_t pos, std::size_t value, const Vec& v) {
    Dims rest = dims;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
    Vec out(static_cast<Eigen::Index>(total(rest)));
    for (std::size_t i = 0; i < total(rest); ++i) {
        auto digits = unflat(rest, i);
        digits.insert(digits.begin() + static_cast<std::ptrdiff_t>(pos), value);
        out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(flat(dims, digits)));
    }
    return normalized(out);
}

Vec to_vec(const StateVector& s) {
    Vec v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s.amplitudes()[i];
    }
    return v;
}

double dev(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    return (a - b).cwiseAbs().maxCoeff();
}

// Up to a global phase, for printed forms that carry no normalization.
double dev_up_to_phase(const Vec& a, const Vec& b) {
    const Complex overlap = b.dot(a);
    const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
    return dev(a, phase * b);
}

Vec dense_bell(std::size_t d) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t j = 0; j < d; ++j) {
        v += ket({d, d}, {j, j});
    }
    return v / std::sqrt(static_cast<double>(d));
}

Vec dense_ghz(std::size_t d) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(d * d * d));
    for (std::size_t j = 0; j < d; ++j) {
        v += ket({d, d, d}, {j, j, j});
    }
    return v / std::sqrt(static_cast<double>(d));
}

ProtocolConfig config_for(Family f, const VerifyOptions& o) {
    ProtocolConfig c;
    c.family = f;
    c.theta = o.theta;
    c.alpha = o.alpha;
    c.beta = o.beta;
    switch (f) {
    case Family::Kbb:
        c.key_dim = c.carrier_dim = o.dim;
        break;
    case Family::ZlgHd:
    case Family::BkHd:
        c.key_dim = o.hd_dim;
        break;
    case Family::KbbHd:
        c.key_dim = o.hd_dim;
        c.carrier_dim = o.hd_carrier;
        break;
    default: break;
    }
    c.validate();
    return c;
}

// Library side: key (x) carrier, then Alice's coupling.
StateVector lib_encoded(const ProtocolConfig& cfg, std::size_t q) {
    auto s = tensor(initial_key(cfg), carrier_state(cfg, "g", q));
    return apply_controlled(s, encode_spec(cfg), "A", "g");
}

// Dense side: key (x) carrier, then the controlled operation from its matrix.
Vec dense_encoded(std::size_t key_dim, std::size_t carrier_dim, const Vec& carrier,
                  const std::function<Mat(std::size_t)>& u) {
    const Dims dims{key_dim, key_dim, carrier_dim};
    return controlled(dims, 0, 2, u) * kron(dense_bell(key_dim), carrier);
}

struct Outcome {
    double deviation = 0.0;
    std::vector<VerifyNote> notes;
};

struct Check {
    std::string name;
    std::string description;
    std::function<Outcome(const VerifyOptions&)> run;
};

Outcome worst(std::initializer_list<double> ds) {
    Outcome o;
    for (double d : ds) {
        o.deviation = std::max(o.deviation, d);
    }
    return o;
}

std::vector<Check> checks() {
    std::vector<Check> out;

    out.push_back({"bell-key", "shared qubit key (|00>+|11>)/sqrt2", [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::Zlg, o);
                       Vec closed = (ket({2, 2}, {0, 0}) + ket({2, 2}, {1, 1})) / std::sqrt(2.0);
                       return worst({dev(to_vec(initial_key(cfg)), closed)});
                   }});

    out.push_back({"rotation-gate", "R(theta) entries and R(theta)xR(theta) leaving the key unchanged",
                   [](const VerifyOptions& o) {
                       const auto g = rotation_gate(o.theta);
                       const Mat m = dense_rotation(o.theta);
                       double d = 0.0;
                       for (int i = 0; i < 2; ++i) {
                           for (int j = 0; j < 2; ++j) {
                               d = std::max(d, std::abs(g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - m(i, j)));
                           }
                       }
                       auto s = apply_single(apply_single(initial_key(config_for(Family::Zlg, o)), g, "A"), g, "B");
                       const Vec dense = kron(m, m) * dense_bell(2);
                       return worst({d, dev(to_vec(s), dense), dev(dense, dense_bell(2))});
                   }});

    for (std::size_t q : {0u, 1u}) {
        out.push_back({"zlg-encode-" + std::to_string(q),
                       q == 0 ? "CNOT(A->g) on the key and |0> gives (|000>+|111>)/sqrt2"
                              : "CNOT(A->g) on the key and |1> gives (|001>+|110>)/sqrt2",
                       [q](const VerifyOptions& o) {
                           const auto cfg = config_for(Family::Zlg, o);
                           const Vec dense = dense_encoded(2, 2, ket({2}, {q}), [](std::size_t i) { return shift(2, static_cast<long long>(i)); });
                           const Vec closed =
                               (ket({2, 2, 2}, {0, 0, q}) + ket({2, 2, 2}, {1, 1, 1 - q})) / std::sqrt(2.0);
                           return worst({dev(to_vec(lib_encoded(cfg, q)), dense), dev(dense, closed)});
                       }});
    }

    out.push_back({"zlg-decode", "Bob's CNOT(B->g) restores key (x) |q>", [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::Zlg, o);
                       double d = 0.0;
                       for (std::size_t q = 0; q < 2; ++q) {
                           auto s = apply_controlled(lib_encoded(cfg, q), decode_spec(cfg), "B", "g");
                           d = std::max(d, dev(to_vec(s), kron(dense_bell(2), Vec(ket({2}, {q})))));
                       }
                       return worst({d});
                   }});

    out.push_back({"nonorth-basis", "carriers a|0>+b|1> and b|0>-a|1> are orthonormal", [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::ZlgNonorth, o);
                       Vec p0(2), p1(2);
                       p0 << o.alpha, o.beta;
                       p1 << o.beta, -o.alpha;
                       const Vec l0 = to_vec(carrier_state(cfg, "g", 0));
                       const Vec l1 = to_vec(carrier_state(cfg, "g", 1));
                       return worst({dev(l0, p0), dev(l1, p1), std::abs(l0.dot(l1)), std::abs(l0.norm() - 1.0),
                                     std::abs(l1.norm() - 1.0)});
                   }});

    out.push_back({"nonorth-encode",
                   "CNOT on key (x) psi0 gives [|00>psi0 + |11>(2ab psi0 + (b^2-a^2) psi1)]/sqrt2",
                   [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::ZlgNonorth, o);
                       const double a = o.alpha;
                       const double b = o.beta;
                       Vec p0(2), p1(2);
                       p0 << a, b;
                       p1 << b, -a;
                       const Vec dense = dense_encoded(2, 2, p0, [](std::size_t i) { return shift(2, static_cast<long long>(i)); });
                       const Vec closed = (kron(Vec(ket({2, 2}, {0, 0})), p0) +
                                           kron(Vec(ket({2, 2}, {1, 1})), Vec(2 * a * b * p0 + (b * b - a * a) * p1))) /
                                          std::sqrt(2.0);
                       return worst({dev(to_vec(lib_encoded(cfg, 0)), dense), dev(dense, closed)});
                   }});

    out.push_back({"kbb-key", "qudit key sum_j |j,j>/sqrt d", [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::Kbb, o);
                       Vec closed = Vec::Zero(static_cast<Eigen::Index>(o.dim * o.dim));
                       for (std::size_t j = 0; j < o.dim; ++j) {
                           closed += ket({o.dim, o.dim}, {j, j});
                       }
                       return worst({dev(to_vec(initial_key(cfg)), closed / std::sqrt(static_cast<double>(o.dim)))});
                   }});

    out.push_back({"controlled-shift", "R_c|i,j> = |i,j+i> and L_c|i,j> = |i,j-i> mod d", [](const VerifyOptions& o) {
                       const auto d = o.dim;
                       const Dims dims{d, d};
                       const SubsystemLayout layout({d, d}, {"c", "t"});
                       double worst_dev = 0.0;
                       for (std::size_t i = 0; i < d; ++i) {
                           for (std::size_t j = 0; j < d; ++j) {
                               const std::size_t idx[] = {i, j};
                               const auto s = basis_state(layout, idx);
                               const auto r = apply_controlled(s, ControlledGateSpec::right_shift(), "c", "t");
                               const auto l = apply_controlled(s, ControlledGateSpec::left_shift(), "c", "t");
                               worst_dev = std::max(worst_dev, dev(to_vec(r), ket(dims, {i, (j + i) % d})));
                               worst_dev = std::max(worst_dev, dev(to_vec(l), ket(dims, {i, (j + d - i) % d})));
                           }
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"kbb-encode", "R_c(a->k) on key (x) |q> gives sum_j |j,j,q+j>/sqrt d", [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::Kbb, o);
                       const auto d = o.dim;
                       double worst_dev = 0.0;
                       for (std::size_t q = 0; q < d; ++q) {
                           const Vec dense = dense_encoded(d, d, ket({d}, {q}), [d](std::size_t i) { return shift(d, static_cast<long long>(i)); });
                           Vec closed = Vec::Zero(dense.size());
                           for (std::size_t j = 0; j < d; ++j) {
                               closed += ket({d, d, d}, {j, j, (q + j) % d});
                           }
                           closed /= std::sqrt(static_cast<double>(d));
                           worst_dev = std::max({worst_dev, dev(to_vec(lib_encoded(cfg, q)), dense), dev(dense, closed)});
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"hadamard-invariance", "H (x) H* leaves sum_j |j,j> unchanged (d and D)", [](const VerifyOptions& o) {
                       double worst_dev = 0.0;
                       for (auto d : {o.dim, o.hd_dim}) {
                           const auto s = apply_single(apply_single(bell_state(d, "A", "B"), hadamard_gate(d), "A"),
                                                       hadamard_gate(d, true), "B");
                           const Vec dense = kron(dense_hadamard(d, false), dense_hadamard(d, true)) * dense_bell(d);
                           worst_dev = std::max({worst_dev, dev(to_vec(s), dense), dev(dense, dense_bell(d))});
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"qudit-controlled-gate", "U_c|i>_D|j>_2 = |i> sx^i |j>", [](const VerifyOptions& o) {
                       const auto d = o.hd_dim;
                       const SubsystemLayout layout({d, 2}, {"c", "t"});
                       Mat sx(2, 2);
                       sx << 0, 1, 1, 0;
                       double worst_dev = 0.0;
                       for (std::size_t i = 0; i < d; ++i) {
                           for (std::size_t j = 0; j < 2; ++j) {
                               const std::size_t idx[] = {i, j};
                               const auto s = apply_controlled(basis_state(layout, idx),
                                                               ControlledGateSpec::power_of(pauli_x()), "c", "t");
                               const Vec expect = kron(Vec(ket({d}, {i})), Vec(power(sx, i) * ket({2}, {j})));
                               worst_dev = std::max(worst_dev, dev(to_vec(s), expect));
                           }
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"hd-key", "D-dimensional key sum_j |j,j>/sqrt D", [](const VerifyOptions& o) {
                       return worst({dev(to_vec(initial_key(config_for(Family::ZlgHd, o))), dense_bell(o.hd_dim))});
                   }});

    const auto sx_power = [](std::size_t i) {
        Mat sx(2, 2);
        sx << 0, 1, 1, 0;
        return power(sx, i);
    };

    out.push_back({"zlg-hd-encode", "U_c on key (x) |q> gives [sum_even |j,j,q> + sum_odd |j,j,q+1>]/sqrt D",
                   [sx_power](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::ZlgHd, o);
                       const auto D = o.hd_dim;
                       double worst_dev = 0.0;
                       for (std::size_t q = 0; q < 2; ++q) {
                           const Vec dense = dense_encoded(D, 2, ket({2}, {q}), sx_power);
                           Vec closed = Vec::Zero(dense.size());
                           for (std::size_t j = 0; j < D; ++j) {
                               closed += ket({D, D, 2}, {j, j, j % 2 == 0 ? q : 1 - q});
                           }
                           closed /= std::sqrt(static_cast<double>(D));
                           worst_dev = std::max({worst_dev, dev(to_vec(lib_encoded(cfg, q)), dense), dev(dense, closed)});
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"zlg-hd-decode", "Bob's U_c restores key (x) |q>", [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::ZlgHd, o);
                       double worst_dev = 0.0;
                       for (std::size_t q = 0; q < 2; ++q) {
                           auto s = apply_controlled(lib_encoded(cfg, q), decode_spec(cfg), "B", "g");
                           worst_dev = std::max(worst_dev, dev(to_vec(s), kron(dense_bell(o.hd_dim), Vec(ket({2}, {q})))));
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"zlg-hd-measured-hadamard",
                   "after a z-measurement of the carrier, H (x) H* on the even branch gives "
                   "sum_l |l>(|l>+|l+d>)/sqrt(2D)",
                   [sx_power](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::ZlgHd, o);
                       const auto D = o.hd_dim;
                       const auto d = D / 2;
                       const std::size_t q = 0;
                       auto s = remove_subsystem(project(lib_encoded(cfg, q), "g", q), "g", q);
                       s = apply_single(apply_single(s, hadamard_gate(D), "A"), hadamard_gate(D, true), "B");

                       const Vec enc = dense_encoded(D, 2, ket({2}, {q}), sx_power);
                       const Vec dense = kron(dense_hadamard(D, false), dense_hadamard(D, true)) * slice({D, D, 2}, 2, q, enc);

                       Vec closed = Vec::Zero(dense.size());
                       Vec delta = Vec::Zero(dense.size());
                       Vec printed = Vec::Zero(dense.size());
                       for (std::size_t l = 0; l < D; ++l) {
                           closed += ket({D, D}, {l, l}) + ket({D, D}, {l, (l + d) % D});
                           printed += ket({D, D}, {l, l}) + 2.0 * ket({D, D}, {l, (l + d) % D});
                           for (std::size_t l2 = 0; l2 < D; ++l2) {
                               const auto diff = static_cast<long long>(l) - static_cast<long long>(l2);
                               const auto dd = static_cast<long long>(d);
                               const double w = (diff == 0) + (diff == dd) + (diff == -dd);
                               delta += w * ket({D, D}, {l, l2});
                           }
                       }
                       closed /= std::sqrt(2.0 * static_cast<double>(D));
                       Outcome out = worst({dev(to_vec(s), dense), dev(dense, closed)});
                       out.notes.push_back({"Delta(l,d) form, integer deltas, normalized", dev_up_to_phase(dense, normalized(delta))});
                       out.notes.push_back({"reduced form with coefficient 2 on |l+d>, normalized",
                                            dev_up_to_phase(dense, normalized(printed))});
                       return out;
                   }});

    out.push_back({"kbb-hd-encode", "U_c(a->r) on key (x) |r> gives sum_j |j,j,r+j mod k>/sqrt D",
                   [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::KbbHd, o);
                       const auto D = o.hd_dim;
                       const auto k = o.hd_carrier;
                       double worst_dev = 0.0;
                       for (std::size_t r = 0; r < k; ++r) {
                           const Vec dense = dense_encoded(D, k, ket({k}, {r}), [k](std::size_t i) {
                               return power(shift(k, 1), i);
                           });
                           Vec closed = Vec::Zero(dense.size());
                           for (std::size_t j = 0; j < D; ++j) {
                               closed += ket({D, D, k}, {j, j, (r + j) % k});
                           }
                           closed /= std::sqrt(static_cast<double>(D));
                           worst_dev = std::max({worst_dev, dev(to_vec(lib_encoded(cfg, r)), dense), dev(dense, closed)});
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"kbb-hd-measured-hadamard",
                   "after a z-measurement of the carrier, H (x) H* on the i = 0 section gives "
                   "sqrt(d)/D sum_l |l> sum_t |l+td>",
                   [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::KbbHd, o);
                       const auto D = o.hd_dim;
                       const auto k = o.hd_carrier;
                       const auto d = D / k;
                       const std::size_t r = 0;
                       auto s = remove_subsystem(project(lib_encoded(cfg, r), "g", r), "g", r);
                       s = apply_single(apply_single(s, hadamard_gate(D), "A"), hadamard_gate(D, true), "B");

                       const Vec enc = dense_encoded(D, k, ket({k}, {r}), [k](std::size_t i) { return power(shift(k, 1), i); });
                       const Vec dense = kron(dense_hadamard(D, false), dense_hadamard(D, true)) * slice({D, D, k}, 2, r, enc);

                       Vec closed = Vec::Zero(dense.size());
                       Vec wide = Vec::Zero(dense.size());
                       Vec printed = Vec::Zero(dense.size());
                       for (std::size_t l = 0; l < D; ++l) {
                           for (std::size_t t = 0; t < k; ++t) {
                               closed += ket({D, D}, {l, (l + t * d) % D});
                               printed += (t == 0 ? 1.0 : 2.0) * ket({D, D}, {l, (l + t * d) % D});
                           }
                           for (long long t = -static_cast<long long>(k - 1); t <= static_cast<long long>(k - 1); ++t) {
                               const auto idx = ((static_cast<long long>(l) + t * static_cast<long long>(d)) %
                                                     static_cast<long long>(D) +
                                                 static_cast<long long>(D)) %
                                                static_cast<long long>(D);
                               wide += ket({D, D}, {l, static_cast<std::size_t>(idx)});
                           }
                       }
                       closed *= std::sqrt(static_cast<double>(d)) / static_cast<double>(D);
                       Outcome out = worst({dev(to_vec(s), dense), dev(dense, closed)});
                       out.notes.push_back({"sum over l-(k-1)d .. l+(k-1)d, normalized", dev_up_to_phase(dense, normalized(wide))});
                       out.notes.push_back({"reduced form with coefficient 2, normalized", dev_up_to_phase(dense, normalized(printed))});
                       return out;
                   }});

    out.push_back({"ghz-key", "shared GHZ key (|000>+|111>)/sqrt2", [](const VerifyOptions& o) {
                       return worst({dev(to_vec(initial_key(config_for(Family::Bk, o))), dense_ghz(2))});
                   }});

    const auto bk_layout_vec = [](std::size_t q) {
        return kron(dense_ghz(2), Vec(kron(Vec(ket({2}, {q})), Vec(ket({2}, {q})))));
    };

    out.push_back({"bk-odd-carriers", "GHZ key (x) |q,q>", [bk_layout_vec](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::Bk, o);
                       double worst_dev = 0.0;
                       for (std::size_t q = 0; q < 2; ++q) {
                           auto s = tensor(tensor(initial_key(cfg), carrier_state(cfg, "x1", q)), carrier_state(cfg, "x2", q));
                           Vec closed = Vec::Zero(32);
                           closed += ket({2, 2, 2, 2, 2}, {0, 0, 0, q, q}) + ket({2, 2, 2, 2, 2}, {1, 1, 1, q, q});
                           worst_dev = std::max({worst_dev, dev(to_vec(s), bk_layout_vec(q)),
                                                 dev(bk_layout_vec(q), closed / std::sqrt(2.0))});
                       }
                       return worst({worst_dev});
                   }});

    const auto bk_encoded = [](const ProtocolConfig& cfg, std::size_t q) {
        auto s = tensor(tensor(initial_key(cfg), carrier_state(cfg, "x1", q)), carrier_state(cfg, "x2", q));
        s = apply_controlled(s, encode_spec(cfg), "a", "x1");
        return apply_controlled(s, encode_spec(cfg), "a", "x2");
    };
    const auto bk_dense_encoded = [](std::size_t D, std::size_t q) {
        const Dims dims{D, D, D, 2, 2};
        Mat sx(2, 2);
        sx << 0, 1, 1, 0;
        const auto u = [sx](std::size_t i) { return power(sx, i); };
        const Vec start = kron(dense_ghz(D), Vec(kron(Vec(ket({2}, {q})), Vec(ket({2}, {q})))));
        return Vec(controlled(dims, 0, 4, u) * (controlled(dims, 0, 3, u) * start));
    };

    out.push_back({"bk-odd-encode", "C_a1 C_a2 gives (|000>|q,q> + |111>|q+1,q+1>)/sqrt2",
                   [bk_encoded, bk_dense_encoded](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::Bk, o);
                       double worst_dev = 0.0;
                       for (std::size_t q = 0; q < 2; ++q) {
                           const Vec dense = bk_dense_encoded(2, q);
                           const Vec closed = (ket({2, 2, 2, 2, 2}, {0, 0, 0, q, q}) +
                                               ket({2, 2, 2, 2, 2}, {1, 1, 1, 1 - q, 1 - q})) /
                                              std::sqrt(2.0);
                           worst_dev = std::max({worst_dev, dev(to_vec(bk_encoded(cfg, q)), dense), dev(dense, closed)});
                       }
                       return worst({worst_dev});
                   }});

    for (std::size_t branch : {0u, 1u}) {
        out.push_back({"bk-odd-branch-" + std::to_string(branch),
                       branch == 0 ? "z-measurement of the carriers leaves |000>|q,q>"
                                   : "z-measurement of the carriers leaves |111>|q+1,q+1>",
                       [branch, bk_encoded, bk_dense_encoded](const VerifyOptions& o) {
                           const auto cfg = config_for(Family::Bk, o);
                           double worst_dev = 0.0;
                           for (std::size_t q = 0; q < 2; ++q) {
                               const std::size_t seen = q ^ branch;
                               const auto s = project(project(bk_encoded(cfg, q), "x1", seen), "x2", seen);
                               Vec dense = bk_dense_encoded(2, q);
                               const Dims dims{2, 2, 2, 2, 2};
                               for (std::size_t i = 0; i < 32; ++i) {
                                   const auto dg = unflat(dims, i);
                                   if (dg[3] != seen || dg[4] != seen) {
                                       dense(static_cast<Eigen::Index>(i)) = 0.0;
                                   }
                               }
                               dense = normalized(dense);
                               const Vec closed = ket(dims, {branch, branch, branch, seen, seen});
                               worst_dev = std::max({worst_dev, dev(to_vec(s), dense), dev(dense, closed)});
                           }
                           return worst({worst_dev});
                       }});
    }

    out.push_back({"bk-hd-key", "D-dimensional GHZ key sum_j |j,j,j>/sqrt D", [](const VerifyOptions& o) {
                       return worst({dev(to_vec(initial_key(config_for(Family::BkHd, o))), dense_ghz(o.hd_dim))});
                   }});

    out.push_back({"bk-hd-encode",
                   "U_c(a1) U_c(a2) gives [sum_even |j,j,j>|q,q> + sum_odd |j,j,j>|q+1,q+1>]/sqrt D",
                   [bk_encoded, bk_dense_encoded](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::BkHd, o);
                       const auto D = o.hd_dim;
                       double worst_dev = 0.0;
                       for (std::size_t q = 0; q < 2; ++q) {
                           const Vec dense = bk_dense_encoded(D, q);
                           Vec closed = Vec::Zero(dense.size());
                           for (std::size_t j = 0; j < D; ++j) {
                               const std::size_t c = j % 2 == 0 ? q : 1 - q;
                               closed += ket({D, D, D, 2, 2}, {j, j, j, c, c});
                           }
                           closed /= std::sqrt(static_cast<double>(D));
                           worst_dev = std::max({worst_dev, dev(to_vec(bk_encoded(cfg, q)), dense), dev(dense, closed)});
                       }
                       return worst({worst_dev});
                   }});

    out.push_back({"bk-hd-even-encode",
                   "H(x)H(x)H on the key is (1/D) sum over l1+l2+l3 = 0 mod D; U_c(a1) then "
                   "maps |q-bar> to |q+l1-bar>",
                   [](const VerifyOptions& o) {
                       const auto cfg = config_for(Family::BkHd, o);
                       const auto D = o.hd_dim;
                       double worst_dev = 0.0;
                       auto key = initial_key(cfg);
                       for (const auto* l : {"a", "b", "c"}) {
                           key = apply_single(key, hadamard_gate(D), l);
                       }
                       const Mat h = dense_hadamard(D, false);
                       const Vec dense_key = kron(h, Mat(kron(h, h))) * dense_ghz(D);
                       Vec delta = Vec::Zero(dense_key.size());
                       for (std::size_t i = 0; i < total({D, D, D}); ++i) {
                           const auto l = unflat({D, D, D}, i);
                           const auto sum = l[0] + l[1] + l[2];
                           if (sum == 0 || sum == D || sum == 2 * D) {
                               delta(static_cast<Eigen::Index>(i)) = 1.0 / static_cast<double>(D);
                           }
                       }
                       worst_dev = std::max({dev(to_vec(key), dense_key), dev(dense_key, delta)});

                       Mat sx(2, 2);
                       sx << 0, 1, 1, 0;
                       for (std::size_t q = 0; q < 2; ++q) {
                           auto s = tensor(key, bk_codeword(q, "x1", "x2"));
                           s = apply_controlled(s, encode_spec(cfg), "a", "x1");
                           const Vec bar0 = (ket({2, 2}, {0, 0}) + ket({2, 2}, {1, 1})) / std::sqrt(2.0);
                           const Vec bar1 = (ket({2, 2}, {0, 1}) + ket({2, 2}, {1, 0})) / std::sqrt(2.0);
                           const Dims dims{D, D, D, 2, 2};
                           const Vec dense = controlled(dims, 0, 3, [sx](std::size_t i) { return power(sx, i); }) *
                                             kron(dense_key, q == 0 ? bar0 : bar1);
                           Vec closed = Vec::Zero(dense.size());
                           for (std::size_t i = 0; i < total({D, D, D}); ++i) {
                               const auto l = unflat({D, D, D}, i);
                               const Vec key_part = ket({D, D, D}, l) * delta(static_cast<Eigen::Index>(i));
                               const bool flip = l[0] % 2 == 1;
                               closed += kron(key_part, (q == 0) != flip ? bar0 : bar1);
                           }
                           worst_dev = std::max({worst_dev, dev(to_vec(s), dense), dev(dense, closed)});
                       }
                       return worst({worst_dev});
                   }});

    for (std::size_t branch : {0u, 1u}) {
        out.push_back({branch == 0 ? "bk-hd-measured-even" : "bk-hd-measured-odd",
                       branch == 0 ? "z-measurement of the carriers leaves sqrt(2/D) sum_even |j,j,j>"
                                   : "z-measurement of the carriers leaves sqrt(2/D) sum_odd |j,j,j>",
                       [branch, bk_encoded, bk_dense_encoded](const VerifyOptions& o) {
                           const auto cfg = config_for(Family::BkHd, o);
                           const auto D = o.hd_dim;
                           const std::size_t q = 0;
                           const std::size_t seen = q ^ branch;
                           auto s = project(bk_encoded(cfg, q), "x1", seen);
                           s = remove_subsystem(remove_subsystem(s, "x1", seen), "x2", seen);
                           const Dims dims{D, D, D, 2, 2};
                           const Vec dense = slice({D, D, D, 2}, 3, seen, slice(dims, 4, seen, bk_dense_encoded(D, q)));
                           Vec closed = Vec::Zero(dense.size());
                           for (std::size_t j = branch; j < D; j += 2) {
                               closed += ket({D, D, D}, {j, j, j});
                           }
                           closed *= std::sqrt(2.0 / static_cast<double>(D));
                           Outcome out = worst({dev(to_vec(s), dense), dev(dense, closed)});
                           if (branch == 0) {
                               const Mat hc = dense_hadamard(D, true);
                               const Vec after = kron(hc, Mat(kron(hc, hc))) * dense;
                               const auto d = D / 2;
                               Vec delta = Vec::Zero(after.size());
                               for (std::size_t i = 0; i < total({D, D, D}); ++i) {
                                   const auto h = unflat({D, D, D}, i);
                                   const auto sum = h[0] + h[1] + h[2];
                                   double w = 0.0;
                                   for (std::size_t m = 0; m <= 5; ++m) {
                                       w += sum == m * d ? 1.0 : 0.0;
                                   }
                                   delta(static_cast<Eigen::Index>(i)) = w;
                               }
                               out.notes.push_back({"H*(x)H*(x)H* of the even branch against Delta(h,d), normalized",
                                                    dev_up_to_phase(after, normalized(delta))});
                           }
                           return out;
                       }});
    }

    out.push_back({"efficiency", "epsilon = b_s/(q_t+b_t): 1 for the reusable key, 1/6 for BB84",
                   [](const VerifyOptions&) {
                       return worst({std::abs(efficiency(reusable_key_scheme().input) - 1.0),
                                     std::abs(efficiency(bb84_scheme().input) - 1.0 / 6.0)});
                   }});

    return out;
}

} // namespace

void VerifyOptions::validate() const {
    if (dim < 2) {
        throw ConfigError("dim", "must be >= 2");
    }
    if (hd_dim < 4 || hd_dim % 2 != 0) {
        throw ConfigError("key_dim", "the higher-dimensional checks need an even D >= 4");
    }
    if (hd_carrier < 2 || hd_dim % hd_carrier != 0 || hd_dim / hd_carrier < 2) {
        throw ConfigError("carrier_dim", "k must divide D with D/k >= 2");
    }
    if (only) {
        const auto names = verify_check_names();
        if (std::find(names.begin(), names.end(), *only) == names.end()) {
            throw ConfigError("only", "unknown check '" + *only + "'");
        }
    }
}

std::vector<std::string> verify_check_names() {
    std::vector<std::string> names;
    for (const auto& c : checks()) {
        names.push_back(c.name);
    }
    return names;
}

std::vector<VerifyResult> run_verify(const VerifyOptions& opts) {
    opts.validate();
    std::vector<VerifyResult> out;
    for (const auto& c : checks()) {
        if (opts.only && *opts.only != c.name) {
            continue;
        }
        VerifyResult r;
        r.name = c.name;
        r.description = c.description;
        auto o = c.run(opts);
        r.deviation = o.deviation;
        r.passed = o.deviation < kAlgebraTol;
        r.notes = std::move(o.notes);
        out.push_back(std::move(r));
    }
    return out;
}

std::string render_verify(const std::vector<VerifyResult>& results) {
    std::ostringstream os;
    std::size_t failed = 0;
    for (const auto& r : results) {
        os << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(28) << r.name << " max deviation "
           << std::scientific << std::setprecision(2) << r.deviation << "  " << r.description << "\n";
        for (const auto& n : r.notes) {
            os << "     info: " << n.what << ": deviation " << std::scientific << std::setprecision(2) << n.deviation
               << "\n";
        }
        failed += r.passed ? 0 : 1;
    }
    os << results.size() - failed << "/" << results.size() << " checks passed\n";
    return os.str();
}

} // namespace qkdlab
