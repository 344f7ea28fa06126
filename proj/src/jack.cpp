#include "mqf/jack.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <mutex>

#include "mqf/parallel.hpp"

namespace mqf {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// For each nu, the partitions lambda reached by the raising moves
// (nu_i, nu_j) -> (nu_i + t, nu_j - t), i < j, 1 <= t <= nu_j, with the
// accumulated weight nu_i - nu_j + 2t. These are the off-diagonal entries
// of the Laplace-Beltrami operator in the monomial basis.
std::vector<std::vector<std::pair<std::size_t, int>>> raising_lists(const std::vector<Partition>& parts) {
    std::map<std::vector<int>, std::size_t> lookup;
    for (std::size_t i = 0; i < parts.size(); ++i) lookup.emplace(parts[i].parts(), i);

    std::vector<std::vector<std::pair<std::size_t, int>>> out(parts.size());
    for (std::size_t b = 0; b < parts.size(); ++b) {
        const auto& nu = parts[b].parts();
        std::map<std::size_t, int> acc;
        for (std::size_t i = 0; i < nu.size(); ++i) {
            for (std::size_t j = i + 1; j < nu.size(); ++j) {
                for (int t = 1; t <= nu[j]; ++t) {
                    std::vector<int> lam(nu);
                    lam[i] += t;
                    lam[j] -= t;
                    std::sort(lam.begin(), lam.end(), std::greater<>());
                    while (!lam.empty() && lam.back() == 0) lam.pop_back();
                    acc[lookup.at(lam)] += nu[i] - nu[j] + 2 * t;
                }
            }
        }
        out[b].assign(acc.begin(), acc.end());
    }
    return out;
}

// Eigenvalue of the Laplace-Beltrami operator up to the weight-only term:
// alpha * n(kappa') - n(kappa).
template <class Num>
Num lb_eigenvalue(const Partition& kappa, const Num& alpha) {
    Num arm_part = 0;
    long leg_part = 0;
    for (int i = 0; i < kappa.length(); ++i) {
        arm_part += Num(kappa[i]) * Num(kappa[i] - 1) / 2;
        leg_part += static_cast<long>(i) * kappa[i];
    }
    return alpha * arm_part - Num(leg_part);
}

// alpha^k k! / prod_s (alpha a(s) + l(s) + alpha): converts the monic (P)
// normalisation to the C normalisation.
template <class Num>
Num c_normaliser(const Partition& kappa, const Num& alpha) {
    const Partition conj = kappa.conjugate();
    Num num = 1;
    for (int i = 1; i <= kappa.weight(); ++i) num *= alpha * Num(i);
    Num den = 1;
    for (int i = 0; i < kappa.length(); ++i) {
        for (int j = 0; j < kappa[i]; ++j) {
            const int arm = kappa[i] - j - 1;
            const int leg = conj[j] - i - 1;
            den *= alpha * Num(arm) + Num(leg) + alpha;
        }
    }
    return num / den;
}

template <class Num>
std::vector<JackTable::Row> build_rows(const std::vector<Partition>& parts, const Num& alpha, int row_len) {
    const auto raise = raising_lists(parts);
    std::vector<Num> eig(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) eig[i] = lb_eigenvalue(parts[i], alpha);

    std::vector<JackTable::Row> rows(parts.size());
    std::vector<Num> c(parts.size());
    for (std::size_t a = 0; a < parts.size(); ++a) {
        if (parts[a].length() > row_len) continue;
        std::fill(c.begin(), c.end(), Num(0));
        c[a] = 1;
        // Reverse-lex order puts every lambda dominating nu before nu.
        for (std::size_t b = a + 1; b < parts.size(); ++b) {
            if (!parts[a].dominates(parts[b])) continue;
            Num s = 0;
            for (const auto& [lam, w] : raise[b])
                if (lam >= a) s += Num(w) * c[lam];
            c[b] = s / (eig[a] - eig[b]);
        }
        const Num norm = c_normaliser(parts[a], alpha);
        for (std::size_t b = a; b < parts.size(); ++b) {
            if (c[b] == 0) continue;
            const Num v = c[b] * norm;
            if constexpr (std::is_same_v<Num, Rational>)
                rows[a].emplace_back(b, v.template convert_to<double>());
            else
                rows[a].emplace_back(b, static_cast<double>(v));
        }
    }
    return rows;
}

} // namespace

JackTable::JackTable(int k, int max_len, AlgebraKind beta, int row_len)
    : k_(k),
      max_len_(std::min(max_len, k)),
      row_len_(row_len < 0 ? max_len_ : std::min(row_len, max_len_)),
      beta_(beta),
      parts_(enumerate_partitions(k, max_len_)) {
    if (k_ <= kExactWeight)
        rows_ = build_rows<Rational>(parts_, Rational(2, beta.beta()), row_len_);
    else
        rows_ = build_rows<long double>(parts_, 2.0L / beta.beta(), row_len_);
}

JackCache& JackCache::global() {
    static JackCache cache;
    return cache;
}

std::shared_ptr<const JackTable> JackCache::get(int k, int max_len, AlgebraKind beta, int row_len) {
    const int len = std::min(max_len, k);
    const int rows = row_len < 0 ? len : std::min(row_len, len);
    const auto key = std::make_tuple(k, len, rows, beta.beta());
    {
        std::shared_lock lock(mu_);
        if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto& slot = tables_[key];
    if (!slot) slot = std::make_shared<const JackTable>(k, len, beta, rows);
    return slot;
}

std::size_t JackCache::size() const {
    std::shared_lock lock(mu_);
    return tables_.size();
}

void JackCache::clear() {
    std::unique_lock lock(mu_);
    tables_.clear();
}

template <class T>
JackEvaluator<T>::JackEvaluator(std::span<const T> eigs, int max_weight, AlgebraKind beta, int max_len)
    : eigs_(eigs.begin(), eigs.end()), nvars_(static_cast<int>(eigs.size())), max_weight_(max_weight), beta_(beta) {
    if (max_weight < 0) throw DomainError("JackEvaluator: negative weight");
    if (max_len >= 0 && max_len < nvars_) strip_len_ = max_len;
    reserve(std::min(max_weight, 16));
}

template <class T>
typename JackEvaluator<T>::Snapshot JackEvaluator<T>::build_monomials(int cap) const {
    auto index = PartitionIndex::shared(cap, std::min(nvars_, cap));
    std::vector<T> mono(index->size(), T(0));
    mono[0] = T(1);
    std::vector<T> powers(cap + 1);
    for (const T& x : eigs_) {
        powers[0] = T(1);
        for (int p = 1; p <= cap; ++p) powers[p] = powers[p - 1] * x;
        // Heaviest first, so m_{mu - v} still holds the previous level.
        for (std::size_t idx = index->size(); idx-- > 1;) {
            T add(0);
            for (const auto& [v, rest] : index->removals(idx)) add += powers[v] * mono[rest];
            mono[idx] += add;
        }
    }
    return {std::move(index), std::make_shared<const std::vector<T>>(std::move(mono))};
}

namespace {

struct Strip {
    std::size_t mu;
    int degree;
    long double psi;
};

// psi_{kappa/mu} = prod b_mu(s) / b_kappa(s) over cells s of mu lying in a row
// that meets kappa/mu but in no column that does; b(s) = (alpha a + l + 1) / (alpha a + l + alpha).
long double strip_psi(const std::vector<int>& kappa, const std::vector<int>& mu, long double alpha) {
    const std::size_t len = kappa.size();
    auto in_strip_column = [&](int j) {
        for (std::size_t i = 0; i < len; ++i) {
            const int m = i < mu.size() ? mu[i] : 0;
            if (m <= j && j < kappa[i]) return true;
        }
        return false;
    };
    auto col_len = [&](int j) {
        int c = 0;
        for (int v : mu) c += v > j;
        return c;
    };
    auto b = [alpha](int a, int l) { return (alpha * a + l + 1) / (alpha * a + l + alpha); };
    long double psi = 1.0L;
    for (std::size_t i = 0; i < len; ++i) {
        const int m = i < mu.size() ? mu[i] : 0;
        if (m == kappa[i]) continue;
        for (int j = 0; j < m; ++j) {
            if (in_strip_column(j)) continue;
            const int l = col_len(j) - static_cast<int>(i) - 1;
            psi *= b(m - j - 1, l) / b(kappa[i] - j - 1, l);
        }
    }
    return psi;
}

} // namespace

template <class T>
typename JackEvaluator<T>::Snapshot JackEvaluator<T>::build_strips(int cap) const {
    const int len = std::min(strip_len_, cap);
    auto index = PartitionIndex::shared(cap, len);
    const long double alpha = beta_.alpha();
    std::map<std::vector<int>, std::size_t> lookup;
    for (std::size_t i = 0; i < index->size(); ++i) lookup.emplace(index->at(i).parts(), i);

    std::vector<std::vector<Strip>> strips(index->size());
    for (std::size_t idx = 0; idx < index->size(); ++idx) {
        const auto& kappa = index->at(idx).parts();
        std::vector<int> mu(kappa.size());
        // mu_i ranges over [kappa_{i+1}, kappa_i].
        auto rec = [&](auto&& self, std::size_t i, int removed) -> void {
            if (i == kappa.size()) {
                std::vector<int> key(mu);
                while (!key.empty() && key.back() == 0) key.pop_back();
                strips[idx].push_back({lookup.at(key), removed, strip_psi(kappa, key, alpha)});
                return;
            }
            const int lo = i + 1 < kappa.size() ? kappa[i + 1] : 0;
            for (int v = kappa[i]; v >= lo; --v) {
                mu[i] = v;
                self(self, i + 1, removed + kappa[i] - v);
            }
        };
        rec(rec, 0, 0);
    }

    std::vector<T> cur(index->size(), T(0)), next(index->size());
    cur[0] = T(1);
    std::vector<T> powers(cap + 1);
    for (const T& x : eigs_) {
        powers[0] = T(1);
        for (int p = 1; p <= cap; ++p) powers[p] = powers[p - 1] * x;
        for (std::size_t idx = 0; idx < index->size(); ++idx) {
            T s(0);
            for (const Strip& st : strips[idx]) s += static_cast<double>(st.psi) * powers[st.degree] * cur[st.mu];
            next[idx] = s;
        }
        cur.swap(next);
    }

    // C_kappa = alpha^k k! / prod (alpha a + l + alpha) * P_kappa.
    for (std::size_t idx = 1; idx < index->size(); ++idx) {
        const Partition& kappa = index->at(idx);
        const Partition conj = kappa.conjugate();
        const int k = kappa.weight();
        long double lf = k * std::log(alpha) + std::lgamma(static_cast<long double>(k) + 1.0L);
        for (int i = 0; i < kappa.length(); ++i)
            for (int j = 0; j < kappa[i]; ++j)
                lf -= std::log(alpha * (kappa[i] - j - 1) + (conj[j] - i - 1) + alpha);
        cur[idx] *= static_cast<double>(std::exp(lf));
    }
    return {std::move(index), std::make_shared<const std::vector<T>>(std::move(cur))};
}

template <class T>
typename JackEvaluator<T>::Snapshot JackEvaluator<T>::reserve(int k) const {
    std::lock_guard lock(grow_mu_);
    if (k <= built_weight_) return state_;
    const int cap = std::min(max_weight_, std::max(k, 2 * built_weight_));
    state_ = strip_len_ >= 0 ? build_strips(cap) : build_monomials(cap);
    built_weight_ = cap;
    return state_;
}

template <class T>
std::vector<T> JackEvaluator<T>::layer(int k, int max_len, int workers) const {
    if (k > max_weight_) throw DomainError("JackEvaluator: weight beyond the precomputed range");
    const Snapshot snap = reserve(k);
    const auto wanted = enumerate_partitions(k, max_len);
    std::vector<T> out(wanted.size(), T(0));
    if (k == 0) {
        out[0] = T(1);
        return out;
    }
    if (strip_len_ >= 0) {
        if (max_len > strip_len_) throw DomainError("JackEvaluator: layer longer than the strip length bound");
        // Both sides list weight-k partitions reverse-lexicographically; wanted is a subset.
        std::size_t j = snap.index->group_begin(k);
        for (std::size_t i = 0; i < wanted.size(); ++i) {
            while (snap.index->at(j) != wanted[i]) ++j;
            out[i] = (*snap.monomials)[j];
        }
        return out;
    }
    const auto table = JackCache::global().get(k, nvars_, beta_, max_len);
    const std::size_t base = snap.index->group_begin(k);
    const std::vector<T>& monomials = *snap.monomials;
    const auto& have = table->partitions();
    // `wanted` and `have` are both reverse-lex; walk them together.
    std::vector<std::size_t> pos(wanted.size(), have.size());
    for (std::size_t i = 0, j = 0; i < wanted.size(); ++i) {
        while (j < have.size() && have[j] > wanted[i]) ++j;
        if (j < have.size() && have[j] == wanted[i]) pos[i] = j;
    }
    parallel_for(wanted.size(), workers, [&](std::size_t i) {
        if (pos[i] == have.size()) return;
        T s(0);
        for (const auto& [mu, coeff] : table->row(pos[i])) s += coeff * monomials[base + mu];
        out[i] = s;
    });
    return out;
}

template <class T>
T JackEvaluator<T>::value(const Partition& kappa) const {
    if (kappa.length() > nvars_) return T(0);
    const auto vals = layer(kappa.weight(), kappa.length());
    const auto parts = enumerate_partitions(kappa.weight(), kappa.length());
    const auto it = std::find(parts.begin(), parts.end(), kappa);
    return vals[static_cast<std::size_t>(it - parts.begin())];
}

template <class T>
T jack_c(const Partition& kappa, std::span<const T> eigs, AlgebraKind beta) {
    if (kappa.length() > static_cast<int>(eigs.size())) return T(0);
    return JackEvaluator<T>(eigs, kappa.weight(), beta).value(kappa);
}

double jack_c(const Partition& kappa, std::initializer_list<double> eigs, AlgebraKind beta) {
    return jack_c<double>(kappa, std::span<const double>(eigs.begin(), eigs.size()), beta);
}

double jack_c_identity(const Partition& kappa, int n, AlgebraKind beta) {
    if (kappa.length() > n) return 0.0;
    const double alpha = beta.alpha();
    const Partition conj = kappa.conjugate();
    double v = 1.0;
    int cells = 0;
    for (int i = 0; i < kappa.length(); ++i) {
        for (int j = 0; j < kappa[i]; ++j) {
            ++cells;
            const int arm = kappa[i] - j - 1;
            const int leg = conj[j] - i - 1;
            v *= alpha * cells;
            v *= (n - i + alpha * j);
            v /= (alpha * arm + leg + 1.0) * (alpha * arm + leg + alpha);
        }
    }
    return v;
}

template <class T>
SeriesResult<T> hypergeom_1F0(double a, std::span<const T> eigs, AlgebraKind beta, const SeriesControl& ctrl) {
    ctrl.validate();
    const bool all_zero = std::all_of(eigs.begin(), eigs.end(), [](const T& x) { return x == T(0); });
    if (all_zero) {
        SeriesResult<T> r;
        r.value = T(1);
        r.converged = true;
        r.partial_sums = {T(1)};
        r.layers = {T(1)};
        r.layer_norms = {1.0};
        return r;
    }
    const int nvars = static_cast<int>(eigs.size());
    const JackEvaluator<T> jack(eigs, ctrl.max_degree, beta);
    double factorial = 1.0;
    auto layer = [&](int k) {
        if (k > 0) factorial *= k;
        const auto parts = enumerate_partitions(k, nvars);
        const auto c = jack.layer(k, nvars, ctrl.workers);
        std::vector<T> terms(parts.size());
        double norm = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            terms[i] = gen_pochhammer(a, parts[i], beta) * c[i] / factorial;
            norm += magnitude(terms[i]);
        }
        return std::pair<T, double>(pairwise_sum<T>(terms), norm);
    };
    return sum_series<T>(layer, ctrl, "hypergeom_1F0");
}

template class JackEvaluator<double>;
template class JackEvaluator<std::complex<double>>;
template double jack_c<double>(const Partition&, std::span<const double>, AlgebraKind);
template std::complex<double> jack_c<std::complex<double>>(const Partition&, std::span<const std::complex<double>>,
                                                           AlgebraKind);
template SeriesResult<double> hypergeom_1F0<double>(double, std::span<const double>, AlgebraKind,
                                                    const SeriesControl&);
template SeriesResult<std::complex<double>> hypergeom_1F0<std::complex<double>>(
    double, std::span<const std::complex<double>>, AlgebraKind, const SeriesControl&);

} // namespace mqf
