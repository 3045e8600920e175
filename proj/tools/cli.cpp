#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "perc/exact.hpp"
#include "perc/montecarlo.hpp"
#include "perc/parallel.hpp"
#include "perc/rng.hpp"
#include "perc/scaling.hpp"
#include "perc/trainer.hpp"

namespace perc::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double to_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

// grid points snapped to 12 decimals so 0.05 + 2 * 0.05 prints as 0.15
double snap(double v) { return std::round(v * 1e12) / 1e12; }

class Csv {
  public:
    explicit Csv(std::vector<std::string> header) : columns_(header.size()) { row_strings(header); }

    template <class... Cells>
    void row(const Cells&... cells) {
        std::vector<std::string> r{cell(cells)...};
        if (r.size() != columns_) throw std::logic_error("CSV row width mismatch");
        row_strings(r);
    }

    std::string str() const { return text_.str(); }

  private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
        requires std::is_arithmetic_v<T>
    static std::string cell(T v) {
        if constexpr (std::is_floating_point_v<T>)
            return format_real(v);
        else
            return std::to_string(v);
    }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) text_ << (k ? "," : "") << cells[k];
        text_ << '\n';
    }

    std::size_t columns_;
    std::ostringstream text_;
};

std::string optional_cell(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

// Option values shared by the subcommands; each subcommand binds the subset
// it uses.
struct Options {
    std::string model = "bond";
    double p = 0.5;
    std::string p_grid = "0.05:0.95:0.05";
    std::string width = "2";
    std::string depth = "1";
    std::uint64_t trials = 100000;
    std::uint64_t train_trials = 50;
    std::uint64_t seed = 1;
    double rho = 1.0;
    double alpha = 1.0;
    std::uint64_t steps = 1000;
    double tau = 1.0;
    double c1 = 1.0;
    std::int64_t c2 = 0;
    double c = 0.5;
    std::uint64_t n = 10;
    std::string kind = "dropconnect";
    std::string activation = "tanh";
    std::size_t batch = 4;
    double noise = 0.0;
    std::string classify_grid;
    std::string out;
    std::string check_file;
};

std::uint64_t single_int(const std::string& text, const char* what) {
    const auto grid = parse_int_grid(text);
    if (grid.size() != 1) throw std::invalid_argument(std::string(what) + " must be a single value");
    return grid.front();
}

std::string cmd_theta(const Options& o) {
    const Model model = parse_model(o.model);
    const Topology topo(single_int(o.width, "--width"), single_int(o.depth, "--depth"));
    const Prob th = theta(model, Prob::from_value(o.p), topo);
    Csv csv({"model", "p", "W", "L", "theta", "log_theta"});
    csv.row(to_string(model), o.p, topo.width(), topo.depth(), th.value(), th.log_value());
    return csv.str();
}

std::string cmd_sweep(const Options& o) {
    const Model model = parse_model(o.model);
    const auto ps = parse_real_grid(o.p_grid);
    const auto widths = parse_int_grid(o.width);
    const auto depths = parse_int_grid(o.depth);
    for (double p : ps) Prob::from_value(p);

    struct Point {
        std::uint64_t w, l;
        double p;
        double theta = 0, lower = 0, upper = 0;
    };
    std::vector<Point> grid;
    for (auto w : widths)
        for (auto l : depths)
            for (double p : ps) grid.push_back({w, l, p});

    parallel_for(grid.size(), [&](std::size_t k) {
        Point& pt = grid[k];
        const Topology topo(pt.w, pt.l);
        const Prob p = Prob::from_value(pt.p);
        pt.theta = theta(model, p, topo).value();
        if (model == Model::bond) {
            const auto b = bond_bounds(p, topo);
            pt.lower = b.lower.value();
            pt.upper = b.upper.value();
        } else {
            pt.lower = pt.upper = pt.theta;
        }
    });

    Csv csv({"model", "p", "W", "L", "theta", "lower_bound", "upper_bound"});
    for (const auto& pt : grid) csv.row(to_string(model), pt.p, pt.w, pt.l, pt.theta, pt.lower, pt.upper);
    return csv.str();
}

std::string cmd_mc(const Options& o) {
    const Model model = parse_model(o.model);
    const Topology topo(single_int(o.width, "--width"), single_int(o.depth, "--depth"));
    const Prob p = Prob::from_value(o.p);
    const Estimate est = estimate_theta(model, p, topo, o.trials, o.seed);
    Csv csv({"model", "p", "W", "L", "trials", "seed", "mean", "stderr", "exact"});
    csv.row(to_string(model), o.p, topo.width(), topo.depth(), est.trials, est.seed, est.mean,
            est.std_error, theta(model, p, topo).value());
    return csv.str();
}

std::string cmd_train(const Options& o) {
    TrainConfig cfg;
    cfg.activation = nn::parse_activation(o.activation);
    cfg.filter = nn::FilterKind::parse(o.kind, o.p);
    cfg.schedule = LrSchedule(o.alpha, o.rho);
    cfg.steps = o.steps;
    cfg.batch_size = o.batch;
    cfg.trials = o.train_trials;
    cfg.noise_std = o.noise;
    cfg.data_seed = derive_seed(o.seed, 0);
    cfg.filter_seed = derive_seed(o.seed, 1);
    cfg.init_seed = derive_seed(o.seed, 2);
    const std::uint64_t width = single_int(o.width, "--width");

    Csv csv({"trial", "L", "W", "p", "T", "displacement", "nopath_fraction", "bound"});
    for (auto depth : parse_int_grid(o.depth)) {
        cfg.topology = Topology(width, depth);
        const TrainReport rep = run_dropout_sgd(cfg);
        for (std::size_t k = 0; k < rep.trials.size(); ++k) {
            const auto& tr = rep.trials[k];
            const double frac = cfg.steps == 0 ? 0.0
                                               : static_cast<double>(tr.nopath_steps) /
                                                     static_cast<double>(cfg.steps);
            csv.row(static_cast<std::uint64_t>(k), depth, width, o.p, cfg.steps, tr.displacement,
                    frac, rep.bound);
        }
    }
    return csv.str();
}

std::string cmd_budget(const Options& o) {
    const LrSchedule sched(o.alpha, o.rho);
    const std::uint64_t width = single_int(o.width, "--width");
    const TrainingBudget b = training_budget(o.n, width, o.p, sched, o.c);
    Csv csv({"n", "W", "p", "alpha", "rho", "c", "log_T", "log_log_T"});
    csv.row(o.n, width, o.p, o.alpha, o.rho, o.c, b.log_steps, b.log_log_steps);
    return csv.str();
}

std::string cmd_classify(const Options& o) {
    const Model model = parse_model(o.model);
    Csv csv({"tau", "C1", "C2", "p", "regime", "p_c", "a", "b"});
    for (double p : parse_real_grid(o.classify_grid.empty() ? format_real(o.p) : o.classify_grid)) {
        const ScalingSpec spec(o.tau, o.c1, o.c2, p, model);
        const RegimeReport r = classify(spec);
        csv.row(o.tau, o.c1, o.c2, p, to_string(r.regime), optional_cell(r.p_critical),
                optional_cell(r.a), optional_cell(r.b));
    }
    return csv.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << text;
    if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::vector<double> parse_real_grid(std::string_view text) {
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:step");
        const double start = to_real(parts[0]), stop = to_real(parts[1]), step = to_real(parts[2]);
        if (!(step > 0.0) || stop < start) throw std::invalid_argument("grid needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) out.push_back(snap(start + static_cast<double>(k) * step));
    } else {
        for (const auto& part : split(text, ',')) out.push_back(to_real(part));
    }
    return out;
}

std::vector<std::uint64_t> parse_int_grid(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (double v : parse_real_grid(text)) {
        if (v < 0.0 || v != std::floor(v)) throw std::invalid_argument("expected a nonnegative integer grid");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<CsvSchema>& schemas() {
    static const std::vector<CsvSchema> all = {
        {"theta", {"model", "p", "W", "L", "theta", "log_theta"}, {"model"}, {}},
        {"sweep", {"model", "p", "W", "L", "theta", "lower_bound", "upper_bound"}, {"model"}, {}},
        {"mc", {"model", "p", "W", "L", "trials", "seed", "mean", "stderr", "exact"}, {"model"}, {}},
        {"train", {"trial", "L", "W", "p", "T", "displacement", "nopath_fraction", "bound"}, {}, {}},
        {"budget", {"n", "W", "p", "alpha", "rho", "c", "log_T", "log_log_T"}, {}, {}},
        {"classify", {"tau", "C1", "C2", "p", "regime", "p_c", "a", "b"}, {"regime"}, {"p_c", "a", "b"}},
    };
    return all;
}

std::string check_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty file");
    const auto header = split(line, ',');
    const auto it = std::find_if(schemas().begin(), schemas().end(),
                                 [&](const CsvSchema& s) { return s.columns == header; });
    if (it == schemas().end()) throw std::invalid_argument("unrecognised header: " + line);
    const CsvSchema& schema = *it;
    auto listed = [](const std::vector<std::string>& v, const std::string& c) {
        return std::find(v.begin(), v.end(), c) != v.end();
    };
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw std::invalid_argument("row " + std::to_string(row) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(header.size()));
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const std::string& col = header[k];
            if (cells[k].empty()) {
                if (listed(schema.optional_columns, col)) continue;
                throw std::invalid_argument("row " + std::to_string(row) + ": empty " + col);
            }
            if (listed(schema.text_columns, col)) continue;
            try {
                to_real(cells[k]);
            } catch (const std::invalid_argument&) {
                throw std::invalid_argument("row " + std::to_string(row) + ": column " + col +
                                            " is not numeric");
            }
        }
    }
    if (row == 1) throw std::invalid_argument("no data rows");
    return schema.name;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Percolation and dropout breakdown experiments"};
    app.set_config("--config", "", "key = value experiment file; [command] sections apply to that command");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    Options o;
    auto common = [&o](CLI::App* sub, bool model, bool topo) {
        if (model) sub->add_option("--model", o.model, "bond or site")->capture_default_str();
        if (topo) {
            sub->add_option("--width", o.width, "width W (grid allowed where noted)")->capture_default_str();
            sub->add_option("--depth", o.depth, "hidden layers L (grid allowed where noted)")->capture_default_str();
        }
        sub->add_option("--out", o.out, "CSV output path (default stdout)");
        sub->configurable();
    };

    auto* theta_cmd = app.add_subcommand("theta", "exact crossing probability");
    common(theta_cmd, true, true);
    theta_cmd->add_option("--p", o.p, "removal probability")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "exact crossing probability and bond bounds over a grid");
    common(sweep_cmd, true, true);
    sweep_cmd->add_option("--p-grid", o.p_grid, "start:stop:step or comma list")->capture_default_str();

    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo crossing estimate");
    common(mc_cmd, true, true);
    mc_cmd->add_option("--p", o.p)->capture_default_str();
    mc_cmd->add_option("--trials", o.trials)->capture_default_str();
    mc_cmd->add_option("--seed", o.seed)->capture_default_str();

    auto* train_cmd = app.add_subcommand("train", "dropout SGD displacement versus the breakdown bound");
    common(train_cmd, false, true);
    train_cmd->add_option("--p", o.p)->capture_default_str();
    train_cmd->add_option("--kind", o.kind, "dropconnect, original, modified-dropconnect, modified-original")
        ->capture_default_str();
    train_cmd->add_option("--activation", o.activation, "identity, relu or tanh")->capture_default_str();
    train_cmd->add_option("--steps", o.steps)->capture_default_str();
    train_cmd->add_option("--trials", o.train_trials)->capture_default_str();
    train_cmd->add_option("--seed", o.seed)->capture_default_str();
    train_cmd->add_option("--rho", o.rho)->capture_default_str();
    train_cmd->add_option("--alpha", o.alpha)->capture_default_str();
    train_cmd->add_option("--batch", o.batch)->capture_default_str();
    train_cmd->add_option("--noise", o.noise, "target noise standard deviation")->capture_default_str();

    auto* budget_cmd = app.add_subcommand("budget", "training horizon below which dropconnect cannot learn");
    common(budget_cmd, false, false);
    budget_cmd->add_option("--width", o.width)->capture_default_str();
    budget_cmd->add_option("--n", o.n, "depth n")->capture_default_str();
    budget_cmd->add_option("--p", o.p)->capture_default_str();
    budget_cmd->add_option("--rho", o.rho)->capture_default_str();
    budget_cmd->add_option("--alpha", o.alpha)->capture_default_str();
    budget_cmd->add_option("--c", o.c)->capture_default_str();

    auto* classify_cmd = app.add_subcommand("classify", "limiting regime under W(n) = floor((C1 ln n)^tau) + C2");
    common(classify_cmd, true, false);
    classify_cmd->add_option("--p", o.p)->capture_default_str();
    classify_cmd->add_option("--p-grid", o.classify_grid, "classify several p at once");
    classify_cmd->add_option("--tau", o.tau)->capture_default_str();
    classify_cmd->add_option("--c1", o.c1)->capture_default_str();
    classify_cmd->add_option("--c2", o.c2)->capture_default_str();

    auto* check_cmd = app.add_subcommand("check", "validate a CSV file emitted by this tool");
    check_cmd->add_option("file", o.check_file)->required();

    // --config is a top-level option; accept it after the subcommand too
    std::vector<std::string> ordered;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            ordered.insert(ordered.begin(), {args[k], args[k + 1]});
            ++k;
        } else if (args[k].starts_with("--config=")) {
            ordered.insert(ordered.begin(), args[k]);
        } else {
            ordered.push_back(args[k]);
        }
    }
    std::vector<std::string> reversed(ordered.rbegin(), ordered.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "perc: " << e.what() << '\n';
        return parse_error;
    }

    try {
        std::string text;
        if (theta_cmd->parsed()) text = cmd_theta(o);
        else if (sweep_cmd->parsed()) text = cmd_sweep(o);
        else if (mc_cmd->parsed()) text = cmd_mc(o);
        else if (train_cmd->parsed()) text = cmd_train(o);
        else if (budget_cmd->parsed()) text = cmd_budget(o);
        else if (classify_cmd->parsed()) text = cmd_classify(o);
        else {
            std::ifstream file(o.check_file, std::ios::binary);
            if (!file) throw IoError("cannot open '" + o.check_file + "'");
            out << o.check_file << ": ok (" << check_csv(file) << ")\n";
            return ok;
        }
        emit(text, o.out, out);
    } catch (const IoError& e) {
        err << "perc: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        err << "perc: " << e.what() << '\n';
        return domain_error;
    }
    return ok;
}

}  // namespace perc::cli
