#include "trimap/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>
#include <thread>

namespace trimap {

namespace {

struct Tally {
    Index useful = 0;
    Index discarded_block = 0;
    Index diagonal_block = 0;
    Index padding = 0;
    Index discarded_blocks = 0;

    Tally& operator+=(const Tally& o) noexcept
    {
        useful += o.useful;
        discarded_block += o.discarded_block;
        diagonal_block += o.diagonal_block;
        padding += o.padding;
        discarded_blocks += o.discarded_blocks;
        return *this;
    }
};

// --- workload sinks ----------------------------------------------------------
// One sink per worker. begin_block / end_block bracket every block that has at
// least one thread past the block-level filter.

struct DummySink {
    std::uint64_t sum = 0;

    void begin_block() noexcept {}
    void end_block() {}
    void operator()(Coord2 c) noexcept { sum += c.i + c.j; }
    void operator()(Coord3 c) noexcept { sum += c.i + c.j + c.k; }
};

struct EdmSink {
    const Point4* points;
    float* out;
    bool diag;

    void begin_block() noexcept {}
    void end_block() {}
    void operator()(Coord2 c) noexcept
    {
        const Index cell = (diag ? tri_number(c.i) : tri_number(c.i) - c.i) + c.j;
        out[cell] = edm_distance(points[c.i], points[c.j]);
    }
    void operator()(Coord3) noexcept {}
};

struct CollisionSink {
    const Sphere* spheres;
    unsigned dim;
    std::vector<Pair> pairs;

    void begin_block() noexcept {}
    void end_block() {}
    void operator()(Coord2 c)
    {
        if (spheres_collide(spheres[c.i], spheres[c.j], dim)) {
            pairs.emplace_back(static_cast<std::uint32_t>(c.i), static_cast<std::uint32_t>(c.j));
        }
    }
    void operator()(Coord3) noexcept {}
};

struct TiledCollisionSink {
    std::span<const Sphere> spheres;
    unsigned dim;
    Tile tile;
    std::vector<Coord2> footprint;
    std::vector<Pair> pairs;

    TiledCollisionSink(std::span<const Sphere> s, unsigned d, Index rho) : spheres(s), dim(d), tile(rho) {}

    void begin_block() noexcept { footprint.clear(); }
    void operator()(Coord2 c) { footprint.push_back(c); }
    void operator()(Coord3) noexcept {}
    void end_block()
    {
        if (footprint.empty()) {
            return;
        }
        tile.stage(footprint, spheres);
        for (const auto& c : footprint) {
            if (spheres_collide(tile.row(c.i), tile.col(c.j), dim)) {
                pairs.emplace_back(static_cast<std::uint32_t>(c.i), static_cast<std::uint32_t>(c.j));
            }
        }
    }
};

/// Counts executions per element before forwarding.
template <class Inner>
struct Tracked {
    Inner inner;
    std::uint32_t* visits;
    bool diag;

    void begin_block() { inner.begin_block(); }
    void end_block() { inner.end_block(); }
    void operator()(Coord2 c)
    {
        const Index cell = (diag ? tri_number(c.i) : tri_number(c.i) - c.i) + c.j;
        std::atomic_ref<std::uint32_t>(visits[cell]).fetch_add(1, std::memory_order_relaxed);
        inner(c);
    }
    void operator()(Coord3 c)
    {
        const Index cell = tet_number(c.k) + tri_number(c.i) + c.j;
        std::atomic_ref<std::uint32_t>(visits[cell]).fetch_add(1, std::memory_order_relaxed);
        inner(c);
    }
};

// --- block execution -----------------------------------------------------------

struct Kernel {
    const GridSpec& g;
    const SqrtStrategy& sqrt;

    // Block dropped by the block-level test: nothing is computed per thread,
    // the split into in-box and padding threads is bookkeeping only.
    void drop_block(Index rows_in_box, Index cols_in_box, Index layers_in_box, Tally& t) const noexcept
    {
        const Index in_box = rows_in_box * cols_in_box * layers_in_box;
        t.discarded_block += in_box;
        t.padding += g.threads_per_block() - in_box;
        ++t.discarded_blocks;
    }

    void drop_padding_block(Tally& t) const noexcept
    {
        t.padding += g.threads_per_block();
        ++t.discarded_blocks;
    }

    Index span_in_box(Index block_coord) const noexcept { return std::min(g.rho, g.n - block_coord * g.rho); }

    template <class Sink>
    void tile2d(Coord2 origin, Tally& t, Sink& sink) const
    {
        const Index rho = g.rho;
        const Index n = g.n;
        sink.begin_block();
        for (Index ty = 0; ty < rho; ++ty) {
            const Index i = origin.i + ty;
            if (i >= n) {
                t.padding += rho;
                continue;
            }
            for (Index tx = 0; tx < rho; ++tx) {
                const Index j = origin.j + tx;
                if (j >= n) {
                    ++t.padding;
                } else if (g.diag ? j <= i : j < i) {
                    ++t.useful;
                    sink(Coord2{i, j});
                } else {
                    ++t.diagonal_block;
                }
            }
        }
        sink.end_block();
    }

    template <class Sink>
    void tile3d(Coord3 origin, Tally& t, Sink& sink) const
    {
        const Index rho = g.rho;
        const Index n = g.n;
        sink.begin_block();
        for (Index tz = 0; tz < rho; ++tz) {
            const Index k = origin.k + tz;
            if (k >= n) {
                t.padding += rho * rho;
                continue;
            }
            for (Index ty = 0; ty < rho; ++ty) {
                const Index i = origin.i + ty;
                if (i >= n) {
                    t.padding += rho;
                    continue;
                }
                for (Index tx = 0; tx < rho; ++tx) {
                    const Index j = origin.j + tx;
                    if (j >= n) {
                        ++t.padding;
                    } else if (j <= i && i <= k) {
                        ++t.useful;
                        sink(Coord3{i, j, k});
                    } else {
                        ++t.diagonal_block;
                    }
                }
            }
        }
        sink.end_block();
    }

    template <class Sink>
    void run(Index b, Tally& t, Sink& sink) const
    {
        const Index rho = g.rho;
        switch (g.strategy) {
        case Strategy::BB: {
            const Index bx = b % g.extents[0];
            const Index by = b / g.extents[0];
            if (bx > by) {
                drop_block(span_in_box(by), span_in_box(bx), 1, t);
                return;
            }
            tile2d({by * rho, bx * rho}, t, sink);
            return;
        }
        case Strategy::LTM: {
            if (b >= g.needed_blocks) {
                drop_padding_block(t);
                return;
            }
            const Coord2 c = g.ltm_strict ? ltm_solve_nodiag(b, sqrt) : ltm_solve(b, sqrt);
            tile2d({c.i * rho, c.j * rho}, t, sink);
            return;
        }
        case Strategy::RB: {
            const Index bx = b % g.extents[0];
            const Index by = b / g.extents[0];
            sink.begin_block();
            for (Index ty = 0; ty < rho; ++ty) {
                const Index y = by * rho + ty;
                for (Index tx = 0; tx < rho; ++tx) {
                    const Index x = bx * rho + tx;
                    if (x >= g.rb.width || y >= g.rb.height) {
                        ++t.padding;
                        continue;
                    }
                    ++t.useful;
                    sink(rb_solve(x, y, g.n, g.diag));
                }
            }
            sink.end_block();
            return;
        }
        case Strategy::REC:
            tile2d(rec_block(g.rec, b).origin, t, sink);
            return;
        case Strategy::UTM: {
            // The inclusive triangle of size n is the strict one of size n + 1, one row up.
            const Index size = g.diag ? g.n + 1 : g.n;
            const Index pairs = tri_number(size - 1);
            const Index per_block = rho * rho;
            sink.begin_block();
            for (Index local = 0; local < per_block; ++local) {
                const Index tid = b * per_block + local;
                if (tid >= pairs) {
                    ++t.padding;
                    continue;
                }
                Coord2 c = utm_to_lower(utm_solve(tid, size, sqrt));
                if (g.diag) {
                    --c.i;
                }
                ++t.useful;
                sink(c);
            }
            sink.end_block();
            return;
        }
        case Strategy::BB3: {
            const Index m = g.extents[0];
            const Index bx = b % m;
            const Index by = (b / m) % m;
            const Index bz = b / (m * m);
            if (bx > by || by > bz) {
                drop_block(span_in_box(by), span_in_box(bx), span_in_box(bz), t);
                return;
            }
            tile3d({by * rho, bx * rho, bz * rho}, t, sink);
            return;
        }
        case Strategy::TET: {
            if (b >= g.needed_blocks) {
                drop_padding_block(t);
                return;
            }
            const Coord3 c = tet_solve(b, sqrt);
            tile3d({c.i * rho, c.j * rho, c.k * rho}, t, sink);
            return;
        }
        }
    }
};

template <class Sink>
struct WorkerResult {
    Tally tally;
    Sink sink;
};

/// Runs every block once, serially or on a worker pool; returns one result per worker.
template <class Sink, class MakeSink>
std::vector<WorkerResult<Sink>> execute(const Kernel& kernel, const LaunchConfig& cfg, MakeSink make_sink)
{
    const Index blocks = kernel.g.total_blocks();
    unsigned workers = 1;
    if (cfg.mode == ExecutionMode::Parallel) {
        workers = cfg.workers != 0 ? cfg.workers : std::max(1U, std::thread::hardware_concurrency());
    }
    std::vector<WorkerResult<Sink>> results;
    results.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        results.push_back({Tally{}, make_sink()});
    }
    if (workers == 1) {
        for (Index b = 0; b < blocks; ++b) {
            kernel.run(b, results[0].tally, results[0].sink);
        }
        return results;
    }

    const Index chunk = std::max<Index>(1, blocks / (Index{workers} * 64));
    std::atomic<Index> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                auto& r = results[w];
                for (;;) {
                    const Index start = next.fetch_add(chunk, std::memory_order_relaxed);
                    if (start >= blocks) {
                        return;
                    }
                    const Index stop = std::min(blocks, start + chunk);
                    for (Index b = start; b < stop; ++b) {
                        kernel.run(b, r.tally, r.sink);
                    }
                }
            });
        }
    }
    return results;
}

template <class Sink>
auto maybe_tracked(Sink sink, std::uint32_t* visits, bool diag)
{
    return Tracked<Sink>{std::move(sink), visits, diag};
}

void validate(const LaunchConfig& cfg)
{
    const bool tet = std::holds_alternative<TetDomain>(cfg.domain);
    if (tet != is_3d(cfg.strategy)) {
        throw std::invalid_argument(std::string("dispatch: strategy ") + std::string(to_string(cfg.strategy)) +
                                    (tet ? " cannot map a tetrahedral domain" : " needs a tetrahedral domain"));
    }
    const Index n = std::visit([](const auto& d) { return d.n(); }, cfg.domain);
    const bool diag = tet || std::get<TriDomain>(cfg.domain).include_diagonal();
    const GridSpec& g = cfg.grid;
    if (g.strategy != cfg.strategy || g.n != n || g.diag != diag) {
        throw std::invalid_argument("dispatch: grid was not built for this strategy and domain");
    }
    if (tet && cfg.workload != Workload::Dummy) {
        throw std::invalid_argument("dispatch: tetrahedral domains only run the dummy workload");
    }
    if (is_collision(cfg.workload) && diag) {
        throw std::invalid_argument("dispatch: collision needs a domain without the diagonal");
    }
}

} // namespace

LaunchConfig make_launch(Strategy strategy, Workload workload, const Domain& domain, Index rho, std::uint64_t seed)
{
    LaunchConfig cfg;
    cfg.strategy = strategy;
    cfg.workload = workload;
    cfg.domain = domain;
    cfg.seed = seed;
    const Index n = std::visit([](const auto& d) { return d.n(); }, domain);
    const bool diag = std::holds_alternative<TetDomain>(domain) || std::get<TriDomain>(domain).include_diagonal();
    cfg.grid = grid_dims(strategy, n, rho, diag);
    return cfg;
}

WorkloadData make_workload_data(Workload workload, Index n, std::uint64_t seed)
{
    WorkloadData data;
    switch (workload) {
    case Workload::Dummy: break;
    case Workload::Edm: data.points = make_points(n, seed); break;
    case Workload::Collision1D: data.spheres = make_spheres(n, 1, seed); break;
    case Workload::Collision3D: data.spheres = make_spheres(n, 3, seed); break;
    }
    return data;
}

SimulationReport dispatch(const LaunchConfig& cfg)
{
    validate(cfg);
    const Index n = std::visit([](const auto& d) { return d.n(); }, cfg.domain);
    return dispatch(cfg, make_workload_data(cfg.workload, n, cfg.seed));
}

SimulationReport dispatch(const LaunchConfig& cfg, const WorkloadData& data)
{
    validate(cfg);
    const Index domain_size = std::visit([](const auto& d) { return d.size(); }, cfg.domain);
    const Index n = cfg.grid.n;
    const bool diag = cfg.grid.diag;

    if (cfg.workload == Workload::Edm && data.points.size() < n) {
        throw std::invalid_argument("dispatch: edm needs n points");
    }
    if (is_collision(cfg.workload) && data.spheres.size() < n) {
        throw std::invalid_argument("dispatch: collision needs n spheres");
    }

    SimulationReport report;
    if (cfg.track_visits) {
        report.visits.assign(domain_size, 0);
    }
    if (cfg.workload == Workload::Edm) {
        report.distances.assign(domain_size, 0.0F);
    }
    std::uint32_t* visits = cfg.track_visits ? report.visits.data() : nullptr;
    const Kernel kernel{cfg.grid, cfg.sqrt};
    const unsigned dim = cfg.workload == Workload::Collision1D ? 1 : 3;

    Tally tally;
    auto run = [&]<class Sink>(auto make_sink, std::type_identity<Sink>) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<WorkerResult<Sink>> results;
        if (visits != nullptr) {
            auto tracked = [&] { return maybe_tracked(make_sink(), visits, diag); };
            auto tracked_results = execute<Tracked<Sink>>(kernel, cfg, tracked);
            report.wall_time = std::chrono::steady_clock::now() - start;
            for (auto& r : tracked_results) {
                results.push_back({r.tally, std::move(r.sink.inner)});
            }
        } else {
            results = execute<Sink>(kernel, cfg, make_sink);
            report.wall_time = std::chrono::steady_clock::now() - start;
        }
        for (const auto& r : results) {
            tally += r.tally;
        }
        return results;
    };

    switch (cfg.workload) {
    case Workload::Dummy: {
        auto results = run([] { return DummySink{}; }, std::type_identity<DummySink>{});
        for (const auto& r : results) {
            report.coordinate_sum += r.sink.sum;
        }
        report.output_digest = report.coordinate_sum;
        break;
    }
    case Workload::Edm: {
        float* out = report.distances.data();
        run([&] { return EdmSink{data.points.data(), out, diag}; }, std::type_identity<EdmSink>{});
        report.output_digest = digest_distances(report.distances);
        break;
    }
    case Workload::Collision1D:
    case Workload::Collision3D: {
        auto gather = [&](auto& results) {
            for (auto& r : results) {
                report.pairs.insert(report.pairs.end(), r.sink.pairs.begin(), r.sink.pairs.end());
            }
        };
        if (cfg.tiled) {
            const std::span<const Sphere> spheres(data.spheres);
            const Index rho = cfg.grid.rho;
            auto results = run([&] { return TiledCollisionSink{spheres, dim, rho}; },
                               std::type_identity<TiledCollisionSink>{});
            gather(results);
        } else {
            auto results = run([&] { return CollisionSink{data.spheres.data(), dim, {}}; },
                               std::type_identity<CollisionSink>{});
            gather(results);
        }
        std::sort(report.pairs.begin(), report.pairs.end());
        report.output_digest = digest_pairs(report.pairs);
        break;
    }
    }

    report.dispatched_threads = cfg.grid.dispatched_threads();
    report.useful_threads = tally.useful;
    report.discarded_block_threads = tally.discarded_block;
    report.diagonal_block_threads = tally.diagonal_block;
    report.padding_threads = tally.padding;
    report.discarded_threads = tally.discarded_block + tally.diagonal_block + tally.padding;
    report.discarded_blocks = tally.discarded_blocks;
    return report;
}

WasteSummary utilization(const SimulationReport& report) noexcept
{
    return {report.discarded_block_threads, report.diagonal_block_threads, report.padding_threads};
}

} // namespace trimap
