#include "trimap/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace trimap {

bool operator==(const BenchmarkRecord& a, const BenchmarkRecord& b)
{
    return std::tie(a.strategy, a.workload, a.n, a.rho, a.sqrt, a.reps, a.median_ns, a.improvement, a.waste_fraction) ==
           std::tie(b.strategy, b.workload, b.n, b.rho, b.sqrt, b.reps, b.median_ns, b.improvement, b.waste_fraction);
}

std::vector<std::chrono::nanoseconds> time_launch(const LaunchConfig& cfg, const WorkloadData& data, unsigned warmups,
                                                  unsigned reps)
{
    for (unsigned w = 0; w < warmups; ++w) {
        dispatch(cfg, data);
    }
    std::vector<std::chrono::nanoseconds> samples;
    samples.reserve(reps);
    for (unsigned r = 0; r < reps; ++r) {
        samples.push_back(dispatch(cfg, data).wall_time);
    }
    return samples;
}

std::int64_t median_ns(std::vector<std::chrono::nanoseconds> samples)
{
    if (samples.empty()) {
        return 0;
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    if (samples.size() % 2 == 1) {
        return samples[mid].count();
    }
    return (samples[mid - 1].count() + samples[mid].count()) / 2;
}

double relative_stddev(const std::vector<std::chrono::nanoseconds>& samples)
{
    if (samples.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (auto s : samples) {
        mean += static_cast<double>(s.count());
    }
    mean /= static_cast<double>(samples.size());
    if (mean <= 0.0) {
        return 0.0;
    }
    double var = 0.0;
    for (auto s : samples) {
        const double d = static_cast<double>(s.count()) - mean;
        var += d * d;
    }
    var /= static_cast<double>(samples.size() - 1);
    return std::sqrt(var) / mean;
}

namespace {

struct Case {
    Workload workload;
    Domain domain;
    Index n;
    Index rho;
    std::vector<Strategy> strategies; // baseline first
};

std::vector<BenchmarkRecord> run_case(const SuiteConfig& cfg, const Case& c, SqrtKind sqrt, std::ostream* log)
{
    const auto data = make_workload_data(c.workload, c.n, cfg.seed);
    std::vector<BenchmarkRecord> rows;
    std::uint64_t reference = 0;
    std::int64_t baseline_ns = 0;

    for (std::size_t idx = 0; idx < c.strategies.size(); ++idx) {
        const Strategy strategy = c.strategies[idx];
        BenchmarkRecord rec;
        rec.strategy = strategy;
        rec.workload = c.workload;
        rec.n = c.n;
        rec.rho = c.rho;
        rec.sqrt = sqrt;
        rec.reps = cfg.reps;

        LaunchConfig launch;
        try {
            launch = make_launch(strategy, c.workload, c.domain, c.rho, cfg.seed);
        } catch (const std::invalid_argument& e) {
            rec.skipped = true;
            rec.note = e.what();
            if (log != nullptr) {
                *log << "warning: skipping " << to_string(strategy) << " n=" << c.n << ": " << e.what() << '\n';
            }
            rows.push_back(std::move(rec));
            continue;
        }
        launch.sqrt = SqrtStrategy::of(sqrt);
        launch.tiled = cfg.tiled_collision && is_collision(c.workload);
        launch.mode = cfg.single_thread ? ExecutionMode::Serial : ExecutionMode::Parallel;

        const auto check = dispatch(launch, data);
        if (idx == 0) {
            reference = check.output_digest;
        } else if (check.output_digest != reference) {
            throw std::runtime_error("refusing to benchmark " + std::string(to_string(strategy)) + " on " +
                                     std::string(to_string(c.workload)) + " n=" + std::to_string(c.n) +
                                     ": output differs from the baseline");
        }

        const auto samples = time_launch(launch, data, cfg.warmups, cfg.reps);
        rec.median_ns = std::max<std::int64_t>(1, median_ns(samples));
        rec.rsd = relative_stddev(samples);
        rec.unstable = rec.rsd > cfg.rsd_threshold;
        rec.waste_fraction = check.dispatched_threads == 0
                                 ? 0.0
                                 : static_cast<double>(check.discarded_threads) /
                                       static_cast<double>(check.dispatched_threads);
        if (idx == 0) {
            baseline_ns = rec.median_ns;
            rec.improvement = 1.0;
        } else {
            rec.improvement = static_cast<double>(baseline_ns) / static_cast<double>(rec.median_ns);
        }
        if (log != nullptr) {
            *log << to_string(c.workload) << ' ' << to_string(strategy) << " n=" << c.n << " sqrt=" << to_string(sqrt)
                 << " median=" << rec.median_ns << "ns I=" << rec.improvement << " rsd=" << rec.rsd
                 << (rec.unstable ? "  [unstable]" : "") << '\n';
        }
        rows.push_back(std::move(rec));
    }
    return rows;
}

std::vector<Strategy> with_baseline(Strategy baseline, const std::vector<Strategy>& listed, bool want_3d)
{
    std::vector<Strategy> out{baseline};
    for (auto s : listed) {
        if (is_3d(s) == want_3d && s != baseline && std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(s);
        }
    }
    return out;
}

} // namespace

std::vector<BenchmarkRecord> run_benchmark(const SuiteConfig& cfg, std::ostream* log)
{
    if (cfg.reps < 3) {
        throw std::invalid_argument("run_benchmark: at least 3 repetitions are required");
    }
    const bool any_2d = std::any_of(cfg.strategies.begin(), cfg.strategies.end(), [](Strategy s) { return !is_3d(s); });
    const bool any_3d = std::any_of(cfg.strategies.begin(), cfg.strategies.end(), [](Strategy s) { return is_3d(s); });
    if ((any_2d && cfg.sizes.empty()) || (any_3d && cfg.sizes_3d.empty()) || cfg.strategies.empty()) {
        throw std::invalid_argument("run_benchmark: empty size or strategy list");
    }
    if (cfg.workloads.empty() || cfg.sqrt.empty()) {
        throw std::invalid_argument("run_benchmark: empty workload or sqrt list");
    }

    std::vector<BenchmarkRecord> out;
    for (SqrtKind sqrt : cfg.sqrt) {
        for (Workload w : cfg.workloads) {
            if (any_2d) {
                const auto strategies = with_baseline(Strategy::BB, cfg.strategies, false);
                for (Index n : cfg.sizes) {
                    const Case c{w, TriDomain{n, !is_collision(w)}, n, cfg.rho, strategies};
                    auto rows = run_case(cfg, c, sqrt, log);
                    out.insert(out.end(), rows.begin(), rows.end());
                }
            }
            if (any_3d && w == Workload::Dummy) {
                const auto strategies = with_baseline(Strategy::BB3, cfg.strategies, true);
                for (Index n : cfg.sizes_3d) {
                    const Case c{w, TetDomain{n}, n, cfg.rho_3d, strategies};
                    auto rows = run_case(cfg, c, sqrt, log);
                    out.insert(out.end(), rows.begin(), rows.end());
                }
            }
        }
    }
    return out;
}

// --- CSV -----------------------------------------------------------------------

namespace {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

template <class T>
T parse_number(std::string_view field, std::size_t line)
{
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    }
    return value;
}

template <class T>
T require(std::optional<T> v, std::string_view field, std::size_t line)
{
    if (!v) {
        throw std::runtime_error("csv line " + std::to_string(line) + ": unknown tag '" + std::string(field) + "'");
    }
    return *v;
}

} // namespace

void write_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out)
{
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        if (r.skipped) {
            continue;
        }
        out << to_string(r.strategy) << ',' << to_string(r.workload) << ',' << r.n << ',' << r.rho << ','
            << to_string(r.sqrt) << ',' << r.reps << ',' << r.median_ns << ',' << format_double(r.improvement) << ','
            << format_double(r.waste_fraction) << '\n';
    }
}

void emit_csv(const std::vector<BenchmarkRecord>& records, const std::filesystem::path& destination)
{
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + destination.string());
    }
    write_csv(records, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("cannot write " + destination.string());
    }
}

std::vector<BenchmarkRecord> parse_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::runtime_error("csv: missing or unexpected header");
    }
    std::vector<BenchmarkRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 9) {
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected 9 fields");
        }
        BenchmarkRecord r;
        r.strategy = require(parse_strategy(f[0]), f[0], lineno);
        r.workload = require(parse_workload(f[1]), f[1], lineno);
        r.n = parse_number<Index>(f[2], lineno);
        r.rho = parse_number<Index>(f[3], lineno);
        r.sqrt = require(parse_sqrt_kind(f[4]), f[4], lineno);
        r.reps = parse_number<unsigned>(f[5], lineno);
        r.median_ns = parse_number<std::int64_t>(f[6], lineno);
        r.improvement = parse_number<double>(f[7], lineno);
        r.waste_fraction = parse_number<double>(f[8], lineno);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<BenchmarkRecord> read_csv(const std::filesystem::path& source)
{
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + source.string());
    }
    return parse_csv(in);
}

// --- plot data -------------------------------------------------------------------

std::vector<std::filesystem::path> emit_plotdata(const std::vector<BenchmarkRecord>& records,
                                                 const std::filesystem::path& directory)
{
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw std::runtime_error("cannot write " + directory.string() + ": " + ec.message());
    }

    std::set<SqrtKind> kinds;
    for (const auto& r : records) {
        if (!r.skipped) {
            kinds.insert(r.sqrt);
        }
    }
    const bool tag_sqrt = kinds.size() > 1;

    // Keyed by file name; insertion order is irrelevant since names are unique.
    std::map<std::string, std::vector<std::pair<Index, double>>> series;
    Index n_min = 0;
    Index n_max = 0;
    bool first = true;
    for (const auto& r : records) {
        if (r.skipped) {
            continue;
        }
        std::string name = std::string(to_string(r.workload)) + "_" + std::string(to_string(r.strategy));
        if (tag_sqrt) {
            name += "_" + std::string(to_string(r.sqrt));
        }
        series[name + ".dat"].emplace_back(r.n, r.improvement);
        n_min = first ? r.n : std::min(n_min, r.n);
        n_max = first ? r.n : std::max(n_max, r.n);
        first = false;
    }

    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& file, const std::vector<std::pair<Index, double>>& points) {
        std::ofstream out(file, std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + file.string());
        }
        out << "# n improvement\n";
        for (const auto& [n, value] : points) {
            out << n << ' ' << format_double(value) << '\n';
        }
        if (!out) {
            throw std::runtime_error("cannot write " + file.string());
        }
        written.push_back(file);
    };
    for (auto& [name, points] : series) {
        std::sort(points.begin(), points.end());
        write(directory / name, points);
    }
    if (!first) {
        write(directory / "reference_I1.dat", {{n_min, 1.0}, {n_max, 1.0}});
    }
    return written;
}

std::vector<TetCeiling> tet_ceilings(const std::vector<BenchmarkRecord>& records)
{
    std::vector<TetCeiling> out;
    for (const auto& tet : records) {
        if (tet.skipped || tet.strategy != Strategy::TET || tet.workload != Workload::Dummy) {
            continue;
        }
        const auto bb = std::find_if(records.begin(), records.end(), [&](const BenchmarkRecord& r) {
            return !r.skipped && r.strategy == Strategy::BB3 && r.workload == Workload::Dummy && r.n == tet.n &&
                   r.rho == tet.rho && r.sqrt == tet.sqrt;
        });
        if (bb == records.end()) {
            continue;
        }
        const Index m = (tet.n + tet.rho - 1) / tet.rho;
        TetCeiling c;
        c.n = tet.n;
        c.alpha_ns = static_cast<double>(bb->median_ns) / static_cast<double>(m * m * m);
        c.gamma_ns = static_cast<double>(tet.median_ns) / static_cast<double>(tet_number(m));
        c.ceiling = 6.0 * c.alpha_ns / c.gamma_ns;
        c.measured = tet.improvement;
        out.push_back(c);
    }
    return out;
}

} // namespace trimap
