#include "latvol/dd.hpp"

#include "latvol/bitset.hpp"

#include <vector>

namespace latvol {

RatVector solve_rational(const IntMatrix& a, const IntVector& b)
{
    const Eigen::Index n = a.rows();
    RatMatrix aug(n, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            aug(i, j) = Rat(a(i, j));
        aug(i, n) = Rat(b(i));
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = -1;
        for (Eigen::Index i = k; i < n; ++i)
            if (aug(i, k) != 0) {
                p = i;
                break;
            }
        if (p < 0)
            throw std::invalid_argument("solve_rational: singular matrix");
        aug.row(k).swap(aug.row(p));
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == k || aug(i, k) == 0)
                continue;
            Rat f = aug(i, k) / aug(k, k);
            for (Eigen::Index j = k; j <= n; ++j)
                aug(i, j) -= f * aug(k, j);
        }
    }
    RatVector x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x(i) = aug(i, n) / aug(i, i);
    return x;
}

namespace {

struct Ray {
    IntVector v;
    Bitset zero; // tight constraints among those already incorporated
};

IntVector primitive_from_rational(const RatVector& x)
{
    Int scale = 1;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        scale = boost::multiprecision::lcm(scale, denominator(x(i)));
    IntVector v(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        v(i) = numerator(x(i)) * (scale / denominator(x(i)));
    make_primitive(v);
    return v;
}

} // namespace

IntMatrix double_description(const IntMatrix& constraints)
{
    const Eigen::Index p = constraints.rows();
    const Eigen::Index e = constraints.cols();

    // Simplicial start cone from e independent rows.
    RankAccumulator acc(e);
    std::vector<Eigen::Index> init_rows;
    std::vector<bool> is_init(p, false);
    for (Eigen::Index i = 0; i < p && acc.rank() < e; ++i) {
        if (acc.add(constraints.row(i).transpose())) {
            init_rows.push_back(i);
            is_init[i] = true;
        }
    }
    if (acc.rank() < e)
        throw NotPointedError();

    IntMatrix a0(e, e);
    for (Eigen::Index i = 0; i < e; ++i)
        a0.row(i) = constraints.row(init_rows[i]);

    std::vector<Ray> rays;
    rays.reserve(static_cast<std::size_t>(e));
    {
        IntVector unit = IntVector::Zero(e);
        for (Eigen::Index j = 0; j < e; ++j) {
            unit(j) = 1;
            Ray r;
            r.v = primitive_from_rational(solve_rational(a0, unit));
            r.zero = Bitset(static_cast<std::size_t>(p));
            for (Eigen::Index i = 0; i < e; ++i)
                if (i != j)
                    r.zero.set(static_cast<std::size_t>(init_rows[i]));
            rays.push_back(std::move(r));
            unit(j) = 0;
        }
    }

    const std::size_t need_common = e >= 2 ? static_cast<std::size_t>(e - 2) : 0;
    std::vector<Int> vals;
    Bitset common;

    for (Eigen::Index h = 0; h < p; ++h) {
        if (is_init[h] || rays.empty())
            continue;
        const IntVector form = constraints.row(h).transpose();

        vals.resize(rays.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            dot_into(vals[i], form, rays[i].v);
            if (vals[i] > 0)
                pos.push_back(i);
            else if (vals[i] < 0)
                neg.push_back(i);
            else
                rays[i].zero.set(static_cast<std::size_t>(h));
        }
        if (neg.empty())
            continue;

        std::vector<Ray> created;
        for (std::size_t ip : pos) {
            for (std::size_t in : neg) {
                common.assign_and(rays[ip].zero, rays[in].zero);
                if (common.count() < need_common)
                    continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size(); ++k) {
                    if (k == ip || k == in)
                        continue;
                    if (rays[k].zero.contains(common)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent)
                    continue;
                Ray nr;
                nr.v = vals[ip] * rays[in].v - vals[in] * rays[ip].v;
                make_primitive(nr.v);
                nr.zero = common;
                nr.zero.set(static_cast<std::size_t>(h));
                created.push_back(std::move(nr));
            }
        }

        std::vector<Ray> next;
        next.reserve(rays.size() - neg.size() + created.size());
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (vals[i] >= 0)
                next.push_back(std::move(rays[i]));
        for (auto& r : created)
            next.push_back(std::move(r));
        rays = std::move(next);
    }

    IntMatrix out(static_cast<Eigen::Index>(rays.size()), e);
    for (std::size_t i = 0; i < rays.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = rays[i].v.transpose();
    return out;
}

} // namespace latvol
