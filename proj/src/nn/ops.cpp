#include "veracity/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "veracity/error.hpp"
#include "veracity/nn/kernels.hpp"

namespace veracity::nn {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ShapeError(message);
}

Tensor softmax_rows(const Tensor& x) {
    Tensor y(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < x.cols(); ++c) mx = std::max(mx, x(r, c));
        double sum = 0.0;
        for (std::size_t c = 0; c < x.cols(); ++c) {
            y(r, c) = std::exp(x(r, c) - mx);
            sum += y(r, c);
        }
        for (std::size_t c = 0; c < x.cols(); ++c) y(r, c) /= sum;
    }
    return y;
}

// dx = y * (dy - rowsum(dy * y))
Tensor softmax_rows_backward(const Tensor& y, const Tensor& dy) {
    Tensor dx(y.rows(), y.cols());
    for (std::size_t r = 0; r < y.rows(); ++r) {
        double dot = 0.0;
        for (std::size_t c = 0; c < y.cols(); ++c) dot += dy(r, c) * y(r, c);
        for (std::size_t c = 0; c < y.cols(); ++c) dx(r, c) = y(r, c) * (dy(r, c) - dot);
    }
    return dx;
}

}  // namespace

Var matmul(Tape& t, Var a, Var b) {
    Tensor out = kernels::matmul(t.value(a), t.value(b));
    return t.record(std::move(out), {a, b}, [a, b](Tape& tp, const Tensor& g) {
        if (tp.requires_grad(a)) tp.accumulate(a, kernels::matmul_nt(g, tp.value(b)));
        if (tp.requires_grad(b)) tp.accumulate(b, kernels::matmul_tn(tp.value(a), g));
    });
}

Var add(Tape& t, Var a, Var b) {
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    require(av.same_shape(bv), "add: shapes " + shape_string(av) + " and " + shape_string(bv));
    Tensor out = av;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
    return t.record(std::move(out), {a, b}, [a, b](Tape& tp, const Tensor& g) {
        tp.accumulate(a, g);
        tp.accumulate(b, g);
    });
}

namespace {

Tensor column_sums(const Tensor& g) {
    Tensor s(1, g.cols());
    for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) s(0, c) += g(r, c);
    }
    return s;
}

}  // namespace

Var add_row(Tape& t, Var x, Var b) {
    const Tensor& xv = t.value(x);
    const Tensor& bv = t.value(b);
    require(bv.rows() == 1 && bv.cols() == xv.cols(), "add_row: row " + shape_string(bv) + " for " + shape_string(xv));
    Tensor out = xv;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += bv(0, c);
    }
    return t.record(std::move(out), {x, b}, [x, b](Tape& tp, const Tensor& g) {
        tp.accumulate(x, g);
        if (tp.requires_grad(b)) tp.accumulate(b, column_sums(g));
    });
}

Var linear(Tape& t, Var x, Var w, Var b) {
    const Tensor& xv = t.value(x);
    const Tensor& wv = t.value(w);
    const Tensor& bv = t.value(b);
    require(xv.cols() == wv.rows(), "linear: input " + shape_string(xv) + " vs weight " + shape_string(wv));
    require(bv.rows() == 1 && bv.cols() == wv.cols(), "linear: bias " + shape_string(bv) + " vs weight " + shape_string(wv));
    Tensor out = kernels::matmul(xv, wv);
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += bv(0, c);
    }
    return t.record(std::move(out), {x, w, b}, [x, w, b](Tape& tp, const Tensor& g) {
        if (tp.requires_grad(x)) tp.accumulate(x, kernels::matmul_nt(g, tp.value(w)));
        if (tp.requires_grad(w)) tp.accumulate(w, kernels::matmul_tn(tp.value(x), g));
        if (tp.requires_grad(b)) tp.accumulate(b, column_sums(g));
    });
}

Var relu(Tape& t, Var x) {
    Tensor out = t.value(x);
    for (auto& v : out.values()) v = v > 0.0 ? v : 0.0;
    return t.record(std::move(out), {x}, [x](Tape& tp, const Tensor& g) {
        const Tensor& xv = tp.value(x);
        Tensor dx(g.rows(), g.cols());
        for (std::size_t i = 0; i < g.size(); ++i) dx[i] = xv[i] > 0.0 ? g[i] : 0.0;
        tp.accumulate(x, dx);
    });
}

Var scale(Tape& t, Var x, double factor) {
    Tensor out = t.value(x);
    for (auto& v : out.values()) v *= factor;
    return t.record(std::move(out), {x}, [x, factor](Tape& tp, const Tensor& g) {
        Tensor dx = g;
        for (auto& v : dx.values()) v *= factor;
        tp.accumulate(x, dx);
    });
}

Var softmax(Tape& t, Var x, int axis) {
    if (axis != 0 && axis != 1) throw InvalidArgument("softmax: axis must be 0 or 1, got " + std::to_string(axis));
    const bool by_column = axis == 0;
    Tensor y = by_column ? softmax_rows(t.value(x).transposed()).transposed() : softmax_rows(t.value(x));
    return t.record(y, {x}, [x, by_column, y](Tape& tp, const Tensor& g) {
        if (by_column) {
            tp.accumulate(x, softmax_rows_backward(y.transposed(), g.transposed()).transposed());
        } else {
            tp.accumulate(x, softmax_rows_backward(y, g));
        }
    });
}

Var cross_entropy(Tape& t, Var probs, std::size_t target) {
    const Tensor& p = t.value(probs);
    require(p.rows() == 1 && p.cols() >= 1, "cross_entropy: probabilities must be 1xC, got " + shape_string(p));
    if (target >= p.cols()) {
        throw InvalidArgument("cross_entropy: target " + std::to_string(target) + " outside " +
                              std::to_string(p.cols()) + " classes");
    }
    double sum = 0.0;
    for (double v : p.values()) {
        if (!(v >= 0.0)) throw InvalidArgument("cross_entropy: probabilities must be non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw InvalidArgument("cross_entropy: probabilities sum to " + std::to_string(sum));
    Tensor loss(1, 1, -std::log(p(0, target)));
    return t.record(std::move(loss), {probs}, [probs, target](Tape& tp, const Tensor& g) {
        const Tensor& pv = tp.value(probs);
        Tensor dp(1, pv.cols());
        dp(0, target) = -g(0, 0) / pv(0, target);
        tp.accumulate(probs, dp);
    });
}

Var scaled_dot_attention(Tape& t, Var q, Var k, Var v, const std::vector<bool>* key_mask) {
    const Tensor& qv = t.value(q);
    const Tensor& kv = t.value(k);
    const Tensor& vv = t.value(v);
    require(qv.cols() == kv.cols(), "attention: query " + shape_string(qv) + " vs key " + shape_string(kv));
    require(kv.rows() == vv.rows(), "attention: key " + shape_string(kv) + " vs value " + shape_string(vv));
    require(kv.rows() > 0, "attention: no keys");
    if (key_mask && key_mask->size() != kv.rows()) {
        throw ShapeError("attention: mask has " + std::to_string(key_mask->size()) + " entries for " +
                         std::to_string(kv.rows()) + " keys");
    }
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(qv.cols()));
    const Tensor scores = kernels::matmul_nt(qv, kv);

    Tensor weights(scores.rows(), scores.cols());
    for (std::size_t r = 0; r < scores.rows(); ++r) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < scores.cols(); ++c) {
            if (!key_mask || (*key_mask)[c]) mx = std::max(mx, scores(r, c) * inv_sqrt_d);
        }
        if (!std::isfinite(mx)) continue;
        double sum = 0.0;
        for (std::size_t c = 0; c < scores.cols(); ++c) {
            if (key_mask && !(*key_mask)[c]) continue;
            weights(r, c) = std::exp(scores(r, c) * inv_sqrt_d - mx);
            sum += weights(r, c);
        }
        for (std::size_t c = 0; c < scores.cols(); ++c) weights(r, c) /= sum;
    }
    Tensor out = kernels::matmul(weights, vv);
    return t.record(std::move(out), {q, k, v}, [q, k, v, weights, inv_sqrt_d](Tape& tp, const Tensor& g) {
        if (tp.requires_grad(v)) tp.accumulate(v, kernels::matmul_tn(weights, g));
        if (!tp.requires_grad(q) && !tp.requires_grad(k)) return;
        Tensor ds = softmax_rows_backward(weights, kernels::matmul_nt(g, tp.value(v)));
        for (auto& x : ds.values()) x *= inv_sqrt_d;
        if (tp.requires_grad(q)) tp.accumulate(q, kernels::matmul(ds, tp.value(k)));
        if (tp.requires_grad(k)) tp.accumulate(k, kernels::matmul_tn(ds, tp.value(q)));
    });
}

void validate_adjacency(const Tensor& a) {
    require(a.rows() == a.cols(), "adjacency must be square, got " + shape_string(a));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (a(i, i) != 0.0) throw InvalidArgument("adjacency diagonal must be zero (self-loops are added internally)");
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) != 0.0 && a(i, j) != 1.0) throw InvalidArgument("adjacency entries must be 0 or 1");
            if (a(i, j) != a(j, i)) throw InvalidArgument("adjacency must be symmetric");
        }
    }
}

Tensor normalized_adjacency(const Tensor& a) {
    validate_adjacency(a);
    const std::size_t n = a.rows();
    std::vector<double> inv_sqrt_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 1.0;
        for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
        inv_sqrt_deg[i] = 1.0 / std::sqrt(deg);
    }
    Tensor out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double hat = a(i, j) + (i == j ? 1.0 : 0.0);
            out(i, j) = inv_sqrt_deg[i] * hat * inv_sqrt_deg[j];
        }
    }
    return out;
}

Var gcn_layer(Tape& t, Var x, const Tensor& adjacency, Var w) {
    const Tensor& xv = t.value(x);
    const Tensor& wv = t.value(w);
    require(xv.rows() > 0, "gcn_layer: empty graph");
    require(adjacency.rows() == xv.rows(),
            "gcn_layer: adjacency " + shape_string(adjacency) + " for " + std::to_string(xv.rows()) + " nodes");
    require(xv.cols() == wv.rows(), "gcn_layer: features " + shape_string(xv) + " vs weight " + shape_string(wv));
    Tensor norm = normalized_adjacency(adjacency);
    Tensor propagated = kernels::matmul(norm, xv);
    Tensor out = kernels::matmul(propagated, wv);
    return t.record(std::move(out), {x, w}, [x, w, norm = std::move(norm), propagated = std::move(propagated)](
                                                 Tape& tp, const Tensor& g) {
        if (tp.requires_grad(w)) tp.accumulate(w, kernels::matmul_tn(propagated, g));
        // The normalized adjacency is symmetric, so N^T dO = N dO.
        if (tp.requires_grad(x)) tp.accumulate(x, kernels::matmul_nt(kernels::matmul(norm, g), tp.value(w)));
    });
}

Var concat_cols(Tape& t, const std::vector<Var>& parts) {
    require(!parts.empty(), "concat_cols: nothing to concatenate");
    const std::size_t rows = t.value(parts.front()).rows();
    std::size_t cols = 0;
    for (Var p : parts) {
        require(t.value(p).rows() == rows, "concat_cols: row counts differ");
        cols += t.value(p).cols();
    }
    Tensor out(rows, cols);
    std::size_t offset = 0;
    for (Var p : parts) {
        const Tensor& pv = t.value(p);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < pv.cols(); ++c) out(r, offset + c) = pv(r, c);
        }
        offset += pv.cols();
    }
    return t.record(std::move(out), parts, [parts](Tape& tp, const Tensor& g) {
        std::size_t off = 0;
        for (Var p : parts) {
            const std::size_t pc = tp.value(p).cols();
            if (tp.requires_grad(p)) {
                Tensor d(g.rows(), pc);
                for (std::size_t r = 0; r < g.rows(); ++r) {
                    for (std::size_t c = 0; c < pc; ++c) d(r, c) = g(r, off + c);
                }
                tp.accumulate(p, d);
            }
            off += pc;
        }
    });
}

Var slice_rows(Tape& t, Var x, std::size_t begin, std::size_t end) {
    const Tensor& xv = t.value(x);
    require(begin < end && end <= xv.rows(), "slice_rows: bad range for " + shape_string(xv));
    Tensor out(end - begin, xv.cols());
    for (std::size_t r = begin; r < end; ++r) {
        for (std::size_t c = 0; c < xv.cols(); ++c) out(r - begin, c) = xv(r, c);
    }
    return t.record(std::move(out), {x}, [x, begin](Tape& tp, const Tensor& g) {
        const Tensor& xv2 = tp.value(x);
        Tensor d(xv2.rows(), xv2.cols());
        for (std::size_t r = 0; r < g.rows(); ++r) {
            for (std::size_t c = 0; c < g.cols(); ++c) d(begin + r, c) = g(r, c);
        }
        tp.accumulate(x, d);
    });
}

Var slice_cols(Tape& t, Var x, std::size_t begin, std::size_t end) {
    const Tensor& xv = t.value(x);
    require(begin < end && end <= xv.cols(), "slice_cols: bad range for " + shape_string(xv));
    Tensor out(xv.rows(), end - begin);
    for (std::size_t r = 0; r < xv.rows(); ++r) {
        for (std::size_t c = begin; c < end; ++c) out(r, c - begin) = xv(r, c);
    }
    return t.record(std::move(out), {x}, [x, begin](Tape& tp, const Tensor& g) {
        const Tensor& xv2 = tp.value(x);
        Tensor d(xv2.rows(), xv2.cols());
        for (std::size_t r = 0; r < g.rows(); ++r) {
            for (std::size_t c = 0; c < g.cols(); ++c) d(r, begin + c) = g(r, c);
        }
        tp.accumulate(x, d);
    });
}

Var mean_rows(Tape& t, Var x) {
    const Tensor& xv = t.value(x);
    require(xv.rows() > 0, "mean_rows: no rows");
    Tensor out(1, xv.cols());
    for (std::size_t r = 0; r < xv.rows(); ++r) {
        for (std::size_t c = 0; c < xv.cols(); ++c) out(0, c) += xv(r, c);
    }
    const double inv = 1.0 / static_cast<double>(xv.rows());
    for (auto& v : out.values()) v *= inv;
    return t.record(std::move(out), {x}, [x, inv](Tape& tp, const Tensor& g) {
        const Tensor& xv2 = tp.value(x);
        Tensor d(xv2.rows(), xv2.cols());
        for (std::size_t r = 0; r < d.rows(); ++r) {
            for (std::size_t c = 0; c < d.cols(); ++c) d(r, c) = g(0, c) * inv;
        }
        tp.accumulate(x, d);
    });
}

}  // namespace veracity::nn
