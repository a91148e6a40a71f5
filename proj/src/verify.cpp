#include "trimap/verify.hpp"

#include "trimap/simulator.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace trimap {

namespace {

void push_block(std::vector<Coord2>& out, Coord2 origin, Index rho, Index n, bool diag)
{
    for (Index ty = 0; ty < rho; ++ty) {
        for (Index tx = 0; tx < rho; ++tx) {
            const Coord2 c{origin.i + ty, origin.j + tx};
            if (c.i < n && (diag ? c.j <= c.i : c.j < c.i)) {
                out.push_back(c);
            }
        }
    }
}

template <class C>
std::string compare_to_oracle(std::vector<C> got, const std::vector<C>& oracle)
{
    std::sort(got.begin(), got.end());
    if (std::adjacent_find(got.begin(), got.end()) != got.end()) {
        return "duplicate coordinate";
    }
    if (got.size() != oracle.size()) {
        return "covers " + std::to_string(got.size()) + " of " + std::to_string(oracle.size()) + " elements";
    }
    // enumerate_* output is sorted in (i, j[, k]) order only for 2-D; sort a copy.
    auto expected = oracle;
    std::sort(expected.begin(), expected.end());
    if (got != expected) {
        return "mapped set differs from the enumeration";
    }
    return {};
}

} // namespace

std::vector<Coord2> mapped_tri(Strategy strategy, Index n, Index rho, bool diag, const SqrtStrategy& sqrt)
{
    const GridSpec g = grid_dims(strategy, n, rho, diag);
    std::vector<Coord2> out;
    switch (strategy) {
    case Strategy::BB:
        for (Index by = 0; by < g.m; ++by) {
            for (Index bx = 0; bx < g.m; ++bx) {
                if (auto block = bb_map(bx, by, g.m)) {
                    push_block(out, {block->i * rho, block->j * rho}, rho, n, diag);
                }
            }
        }
        break;
    case Strategy::LTM:
        for (Index omega = 0; omega < g.needed_blocks; ++omega) {
            const Coord2 b = g.ltm_strict ? ltm_map_nodiag(omega, g.m, sqrt) : ltm_map(omega, g.m, sqrt);
            push_block(out, {b.i * rho, b.j * rho}, rho, n, diag);
        }
        break;
    case Strategy::RB:
        for (Index y = 0; y < g.rb.height; ++y) {
            for (Index x = 0; x < g.rb.width; ++x) {
                out.push_back(rb_map(x, y, n, diag));
            }
        }
        break;
    case Strategy::REC:
        for (Index b = 0; b < g.rec.total_blocks(); ++b) {
            push_block(out, rec_block(g.rec, b).origin, rho, n, diag);
        }
        break;
    case Strategy::UTM: {
        const Index size = diag ? n + 1 : n;
        const Index pairs = tri_number(size - 1);
        for (Index t = 0; t < pairs; ++t) {
            Coord2 c = utm_map(t, size, sqrt);
            if (diag) {
                --c.i;
            }
            out.push_back(c);
        }
        break;
    }
    case Strategy::BB3:
    case Strategy::TET:
        throw std::invalid_argument("mapped_tri: 3-D strategy");
    }
    return out;
}

std::vector<Coord3> mapped_tet(Strategy strategy, Index n, Index rho, const SqrtStrategy& sqrt)
{
    const GridSpec g = grid_dims(strategy, n, rho);
    std::vector<Coord3> out;
    auto push = [&](Coord3 block) {
        for (Index tz = 0; tz < rho; ++tz) {
            for (Index ty = 0; ty < rho; ++ty) {
                for (Index tx = 0; tx < rho; ++tx) {
                    const Coord3 c{block.i * rho + ty, block.j * rho + tx, block.k * rho + tz};
                    if (c.k < n && c.j <= c.i && c.i <= c.k) {
                        out.push_back(c);
                    }
                }
            }
        }
    };
    if (strategy == Strategy::TET) {
        for (Index omega = 0; omega < g.needed_blocks; ++omega) {
            push(tet_map(omega, g.m, sqrt));
        }
    } else if (strategy == Strategy::BB3) {
        for (Index bz = 0; bz < g.m; ++bz) {
            for (Index by = 0; by <= bz; ++by) {
                for (Index bx = 0; bx <= by; ++bx) {
                    push({by, bx, bz});
                }
            }
        }
    } else {
        throw std::invalid_argument("mapped_tet: 2-D strategy");
    }
    return out;
}

std::vector<CheckResult> run_verification(const VerifyOptions& opts, std::ostream* log)
{
    std::vector<CheckResult> results;
    auto record = [&](std::string name, std::string failure) {
        CheckResult r{std::move(name), failure.empty(), std::move(failure)};
        if (log != nullptr) {
            *log << (r.passed ? "PASS " : "FAIL ") << r.name << (r.passed ? "" : ": " + r.detail) << '\n';
        }
        results.push_back(std::move(r));
    };
    auto corrupt = [&](Strategy s, auto& coords) {
        if (opts.mutate == s && !coords.empty()) {
            coords.back() = coords.front();
            if (coords.size() == 1) {
                ++coords.front().i;
            }
        }
    };

    const std::vector<Strategy> flat{Strategy::BB, Strategy::LTM, Strategy::RB, Strategy::REC, Strategy::UTM};
    for (Index n : opts.sizes) {
        for (bool diag : {true, false}) {
            const TriDomain domain{n, diag};
            const auto oracle = enumerate_tri(domain);
            std::ostringstream tag;
            tag << "n=" << n << (diag ? " diag" : " strict") << " rho=" << opts.rho;

            std::uint64_t reference = 0;
            for (Strategy s : flat) {
                const std::string name = std::string(to_string(s)) + " " + tag.str();
                if (s == Strategy::REC && n % opts.rho != 0) {
                    continue;
                }
                std::string failure;
                try {
                    auto coords = mapped_tri(s, n, opts.rho, diag, opts.sqrt);
                    corrupt(s, coords);
                    failure = compare_to_oracle(std::move(coords), oracle);
                    if (failure.empty()) {
                        auto cfg = make_launch(s, Workload::Dummy, domain, opts.rho);
                        cfg.sqrt = opts.sqrt;
                        cfg.mode = ExecutionMode::Serial;
                        cfg.track_visits = true;
                        const auto rep = dispatch(cfg);
                        if (!std::all_of(rep.visits.begin(), rep.visits.end(), [](auto v) { return v == 1; })) {
                            failure = "simulator did not run every element exactly once";
                        } else if (rep.dispatched_threads != rep.useful_threads + rep.discarded_threads) {
                            failure = "thread accounting does not add up";
                        } else if (s == Strategy::BB) {
                            reference = rep.output_digest;
                        } else if (rep.output_digest != reference) {
                            failure = "digest differs from BB";
                        }
                    }
                } catch (const std::exception& e) {
                    failure = e.what();
                }
                record(name, failure);
            }
        }
    }

    for (Index n : opts.sizes_3d) {
        const TetDomain domain{n};
        const auto oracle = enumerate_tet(domain);
        std::uint64_t reference = 0;
        for (Strategy s : {Strategy::BB3, Strategy::TET}) {
            const std::string name = std::string(to_string(s)) + " n=" + std::to_string(n) + " rho=" +
                                     std::to_string(opts.rho_3d);
            std::string failure;
            try {
                auto coords = mapped_tet(s, n, opts.rho_3d, opts.sqrt);
                corrupt(s, coords);
                failure = compare_to_oracle(std::move(coords), oracle);
                if (failure.empty()) {
                    auto cfg = make_launch(s, Workload::Dummy, domain, opts.rho_3d);
                    cfg.sqrt = opts.sqrt;
                    cfg.mode = ExecutionMode::Serial;
                    cfg.track_visits = true;
                    const auto rep = dispatch(cfg);
                    if (!std::all_of(rep.visits.begin(), rep.visits.end(), [](auto v) { return v == 1; })) {
                        failure = "simulator did not run every element exactly once";
                    } else if (s == Strategy::BB3) {
                        reference = rep.output_digest;
                    } else if (rep.output_digest != reference) {
                        failure = "digest differs from BB3D";
                    }
                }
            } catch (const std::exception& e) {
                failure = e.what();
            }
            record(name, failure);
        }
    }
    return results;
}

} // namespace trimap
