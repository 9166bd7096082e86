#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "astopo/error.hpp"
#include "astopo/metrics.hpp"
#include "astopo/parallel.hpp"

namespace astopo {

namespace {

// Per-thread scratch for single-source dependency accumulation.
class BrandesWorkspace {
public:
    explicit BrandesWorkspace(std::size_t n) : dist_(n, -1), sigma_(n, 0.0), delta_(n, 0.0) {
        order_.reserve(n);
    }

    // Adds the dependencies of source s to acc.
    void accumulate(const Graph& g, Graph::Vertex s, std::vector<double>& acc) {
        order_.clear();
        dist_[s] = 0;
        sigma_[s] = 1.0;
        order_.push_back(s);
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const auto v = order_[head];
            const int next = dist_[v] + 1;
            for (auto w : g.neighbors(v)) {
                if (dist_[w] < 0) {
                    dist_[w] = next;
                    order_.push_back(w);
                }
                if (dist_[w] == next) sigma_[w] += sigma_[v];
            }
        }
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            const auto w = *it;
            const double coeff = (1.0 + delta_[w]) / sigma_[w];
            const int prev = dist_[w] - 1;
            for (auto v : g.neighbors(w))
                if (dist_[v] == prev) delta_[v] += sigma_[v] * coeff;
            if (w != s) acc[w] += delta_[w];
        }
        for (auto v : order_) {
            dist_[v] = -1;
            sigma_[v] = 0.0;
            delta_[v] = 0.0;
        }
    }

private:
    std::vector<int> dist_;
    std::vector<double> sigma_;
    std::vector<double> delta_;
    std::vector<Graph::Vertex> order_;
};

constexpr std::size_t kSourcesPerBlock = 64;

}  // namespace

Betweenness betweenness(const Graph& g, unsigned threads) {
    const std::size_t n = g.vertex_count();
    Betweenness out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    if (n == 0) return out;

    const std::size_t blocks = (n + kSourcesPerBlock - 1) / kSourcesPerBlock;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), blocks));

    std::atomic<std::size_t> next_block{0};
    std::mutex mu;
    std::condition_variable turn;
    std::size_t next_to_reduce = 0;

    // Blocks are claimed in increasing order and reduced strictly in block
    // order, so a worker waiting for its turn only waits on earlier blocks
    // that are already being processed.
    auto work = [&] {
        BrandesWorkspace ws(n);
        std::vector<double> partial(n);
        for (std::size_t b; (b = next_block.fetch_add(1)) < blocks;) {
            std::fill(partial.begin(), partial.end(), 0.0);
            const std::size_t end = std::min(n, (b + 1) * kSourcesPerBlock);
            for (std::size_t s = b * kSourcesPerBlock; s < end; ++s)
                ws.accumulate(g, static_cast<Graph::Vertex>(s), partial);
            std::unique_lock lock(mu);
            turn.wait(lock, [&] { return next_to_reduce == b; });
            for (std::size_t v = 0; v < n; ++v) out.raw[v] += partial[v];
            ++next_to_reduce;
            turn.notify_all();
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    if (n >= 2) {
        const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
        for (std::size_t v = 0; v < n; ++v) out.normalized[v] = out.raw[v] / pairs;
    }
    return out;
}

std::optional<std::vector<double>> trace_betweenness(const Snapshot& s) {
    if (s.trace_total() == 0) return std::nullopt;
    std::vector<double> out;
    out.reserve(s.asns().size());
    const double total = static_cast<double>(s.trace_total());
    for (const auto& c : s.counters()) out.push_back(static_cast<double>(c.mid_trace) / total);
    return out;
}

std::optional<double> trace_betweenness(const Snapshot& s, Asn asn) {
    const auto& c = s.counters(asn);
    if (s.trace_total() == 0) return std::nullopt;
    return static_cast<double>(c.mid_trace) / static_cast<double>(s.trace_total());
}

PageRankVector pagerank(const Graph& g, const PageRankOptions& opts,
                        const std::function<void(int, std::span<const double>)>& observer) {
    if (!(opts.damping > 0.0 && opts.damping < 1.0))
        throw ParameterError("pagerank: damping must lie in (0, 1)");
    if (!(opts.tol > 0.0) || !std::isfinite(opts.tol)) throw ParameterError("pagerank: tol must be positive");
    if (opts.max_iter < 1) throw ParameterError("pagerank: max_iter must be >= 1");
    const std::size_t n = g.vertex_count();
    if (n == 0) throw ParameterError("pagerank: graph has no vertices");

    const double d = opts.damping;
    const double inv_n = 1.0 / static_cast<double>(n);
    PageRankVector result{std::vector<double>(n, inv_n), 0, 0.0};
    std::vector<double> share(n), next(n);
    const unsigned workers = resolve_threads(opts.threads);

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        auto& pr = result.score;
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const auto deg = g.degree(static_cast<Graph::Vertex>(v));
            if (deg == 0) {
                dangling += pr[v];
                share[v] = 0.0;
            } else {
                share[v] = pr[v] / static_cast<double>(deg);
            }
        }
        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        parallel_slices(n, workers, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t u = begin; u < end; ++u) {
                double sum = 0.0;
                for (auto v : g.neighbors(static_cast<Graph::Vertex>(u))) sum += share[v];
                next[u] = base + d * sum;
            }
        });
        double residual = 0.0;
        for (std::size_t u = 0; u < n; ++u) residual += std::abs(next[u] - pr[u]);
        pr.swap(next);
        result.iterations_used = iter;
        result.residual = residual;
        if (observer) observer(iter, pr);
        if (residual <= opts.tol) break;
    }
    return result;
}

}  // namespace astopo
