#include "dynot/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dynot/color.hpp"
#include "dynot/errors.hpp"
#include "dynot/io.hpp"
#include "dynot/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace dynot {

namespace {

struct SolveOptions {
    std::size_t steps = 32;
    std::size_t iters = 2000;
    double tau = 0.95;
    double sigma = 0.95;
    double theta = 1.0;
    std::size_t report_every = 10;

    SolverParams params() const {
        SolverParams p;
        p.tau = tau;
        p.sigma = sigma;
        p.theta = theta;
        p.max_iter = iters;
        p.report_every = report_every;
        return p;
    }

    void validate() const {
        params().validate();
        if (steps < 2) throw InvalidParams("--steps must be at least 2");
    }
};

void add_solve_options(CLI::App& cmd, SolveOptions& o) {
    cmd.add_option("--steps", o.steps, "Time steps P (frames 0..P are written)")->capture_default_str();
    cmd.add_option("--iters", o.iters, "Primal-dual iterations")->capture_default_str();
    cmd.add_option("--tau", o.tau, "Primal step size")->capture_default_str();
    cmd.add_option("--sigma", o.sigma, "Dual step size (tau*sigma < 1)")->capture_default_str();
    cmd.add_option("--theta", o.theta, "Over-relaxation parameter")->capture_default_str();
    cmd.add_option("--report-every", o.report_every, "Diagnostics interval")->capture_default_str();
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string frame_name(std::size_t k, const std::string& ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%03zu.%s", k, ext.c_str());
    return buf;
}

std::string bc_name(Boundary bc) { return bc == Boundary::Periodic ? "periodic" : "neumann"; }

Boundary parse_bc_kind(const std::string& s) {
    if (s == "neumann") return Boundary::Neumann;
    if (s == "periodic") return Boundary::Periodic;
    throw InvalidParams("unknown boundary condition '" + s + "' (use neumann or periodic)");
}

// "--bc 0=periodic,color=neumann": axis by index, or height/width/color in rgb mode.
std::vector<Boundary> parse_bc(const std::string& spec, std::vector<Boundary> bcs, bool rgb) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidParams("--bc entry '" + item + "' is not axis=kind");
        const std::string axis = item.substr(0, eq);
        std::size_t index = 0;
        if (rgb && axis == "height") {
            index = 0;
        } else if (rgb && axis == "width") {
            index = 1;
        } else if (rgb && axis == "color") {
            index = 2;
        } else if (!axis.empty() && axis.find_first_not_of("0123456789") == std::string::npos) {
            index = std::stoul(axis);
        } else {
            throw InvalidParams("--bc axis '" + axis + "' is not recognised");
        }
        if (index >= bcs.size()) throw InvalidParams("--bc axis " + axis + " out of range");
        bcs[index] = parse_bc_kind(item.substr(eq + 1));
    }
    return bcs;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_diagnostics(const std::vector<Diagnostics>& history, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "iter,objective,constraint_residual,coupling_residual,primal_change\n";
    for (const auto& d : history) {
        out << d.iteration << ',' << format_double(d.objective) << ',' << format_double(d.constraint_residual)
            << ',' << format_double(d.coupling_residual) << ',' << format_double(d.primal_change) << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<std::uint64_t> to_dims(const std::vector<std::size_t>& shape, std::size_t last) {
    std::vector<std::uint64_t> dims(shape.begin(), shape.end());
    dims.push_back(last);
    return dims;
}

// Raw iterates, so `eval` can recompute diagnostics without quantization.
void save_solution(const SolveResult& sol, const GridSpec& grid, const fs::path& dir) {
    ensure_dir(dir);
    const std::size_t p = grid.time_steps();
    const auto f = sol.f.data();
    save_tensor({to_dims(grid.cell_shape(), p - 1), {f.begin(), f.end()}}, dir / "density.dten");
    for (std::size_t i = 0; i < grid.dims(); ++i) {
        const auto m = sol.m.component(i);
        save_tensor({to_dims(grid.face_shape(i), p), {m.begin(), m.end()}},
                    dir / ("momentum_" + std::to_string(i) + ".dten"));
        const auto u = sol.uv.u[i].data();
        save_tensor({to_dims(grid.cell_shape(), p), {u.begin(), u.end()}}, dir / ("u_" + std::to_string(i) + ".dten"));
    }
    const auto v = sol.uv.v.data();
    save_tensor({to_dims(grid.cell_shape(), p), {v.begin(), v.end()}}, dir / "v.dten");
}

std::vector<double> load_values(const fs::path& path, std::size_t expected) {
    Tensor t = load_tensor(path);
    if (t.data.size() != expected) {
        throw SizeMismatch(path.string() + ": expected " + std::to_string(expected) + " values, found " +
                           std::to_string(t.data.size()));
    }
    return std::move(t.data);
}

PdhgSolver::Observer progress(std::ostream& err) {
    return [&err](const Diagnostics& d) {
        err << "iter " << d.iteration << "  objective " << format_double(d.objective) << "  constraint "
            << format_double(d.constraint_residual) << "  coupling " << format_double(d.coupling_residual) << '\n';
    };
}

struct SignalInputs {
    Tensor a;
    Tensor b;
};

SignalInputs load_signal_inputs(const fs::path& a, const fs::path& b) {
    SignalInputs in{load_tensor(a), load_tensor(b)};
    if (in.a.dims != in.b.dims) throw DimensionMismatch("input tensors differ in shape");
    if (in.a.dims.empty() || in.a.dims.size() > 4) throw InvalidParams("signal inputs need 1 to 4 dimensions");
    return in;
}

GridSpec signal_grid(const std::vector<std::uint64_t>& dims, const std::vector<Boundary>& bcs, std::size_t steps) {
    std::vector<AxisSpec> axes;
    for (std::size_t i = 0; i < dims.size(); ++i) axes.push_back({static_cast<std::size_t>(dims[i]), bcs[i]});
    return GridSpec(std::move(axes), steps);
}

std::vector<Boundary> bcs_from_json(const json& j) {
    std::vector<Boundary> bcs;
    for (const auto& s : j) bcs.push_back(parse_bc_kind(s.get<std::string>()));
    return bcs;
}

json bcs_to_json(const GridSpec& grid) {
    json j = json::array();
    for (const auto& a : grid.axes()) j.push_back(bc_name(a.bc));
    return j;
}

json solve_json(const SolveOptions& o) {
    return {{"steps", o.steps}, {"iters", o.iters}, {"tau", o.tau}, {"sigma", o.sigma},
            {"theta", o.theta}, {"report_every", o.report_every}};
}

int run_transport(const std::string& a, const std::string& b, const std::string& mode, const std::string& bc_spec,
                  const std::string& frames_opt, const fs::path& out_dir, const SolveOptions& o, std::ostream& out,
                  std::ostream& err) {
    o.validate();
    if (mode != "signal" && mode != "rgb") throw InvalidParams("--mode must be signal or rgb");
    const bool rgb = mode == "rgb";
    const std::string frames = frames_opt.empty() ? (rgb ? "png" : "tensor") : frames_opt;
    if (frames != "png" && frames != "ppm" && frames != "tensor") throw InvalidParams("--frames must be png, ppm or tensor");
    if (!rgb && frames != "tensor") throw InvalidParams("signal mode writes tensor frames only");

    json run = {{"command", "transport"}, {"mode", mode}, {"frames", frames},
                {"inputs", {fs::absolute(a).string(), fs::absolute(b).string()}}, {"solver", solve_json(o)}};
    const std::size_t p = o.steps;
    std::vector<Diagnostics> history;

    if (rgb) {
        const RgbImage img0 = load_image(a);
        const RgbImage img1 = load_image(b);
        const auto bcs = parse_bc(bc_spec, {Boundary::Neumann, Boundary::Neumann, Boundary::Periodic}, true);
        if (bcs[0] != Boundary::Neumann || bcs[1] != Boundary::Neumann) {
            throw InvalidParams("rgb mode keeps Neumann conditions on height and width");
        }
        const RgbTransportResult result = rgb_transport(img0, img1, p, o.params(), bcs[2], progress(err));
        ensure_dir(out_dir);
        for (std::size_t k = 0; k <= p; ++k) {
            if (frames == "tensor") {
                std::vector<double> data = result.densities[k];
                const double factor = result.normalized.display_factor(static_cast<double>(k) / static_cast<double>(p));
                for (double& x : data) x *= factor;
                save_tensor({{img0.height, img0.width, 3}, std::move(data)}, out_dir / frame_name(k, "dten"));
            } else {
                save_image(result.frames[k], out_dir / frame_name(k, frames));
            }
        }
        const GridSpec grid = rgb_grid(img0.width, img0.height, p, bcs[2]);
        save_solution(result.solution, grid, out_dir / "solution");
        run["bc"] = bcs_to_json(grid);
        history = result.solution.history;
    } else {
        const SignalInputs in = load_signal_inputs(a, b);
        const auto bcs = parse_bc(bc_spec, std::vector<Boundary>(in.a.dims.size(), Boundary::Neumann), false);
        const NormalizedPair norm = normalize_masses(in.a.data, in.b.data);
        const TransportProblem problem{signal_grid(in.a.dims, bcs, p), norm.f0, norm.f1};
        const SolveResult sol = solve_transport(problem, o.params(), progress(err));
        ensure_dir(out_dir);
        const auto frames_data = density_frames(problem, sol.f);
        for (std::size_t k = 0; k <= p; ++k) {
            std::vector<double> data;
            if (k == 0) {
                data = in.a.data;
            } else if (k == p) {
                data = in.b.data;
            } else {
                data = frames_data[k];
                const double factor = norm.display_factor(static_cast<double>(k) / static_cast<double>(p));
                for (double& x : data) x *= factor;
            }
            save_tensor({in.a.dims, std::move(data)}, out_dir / frame_name(k, "dten"));
        }
        save_solution(sol, problem.grid, out_dir / "solution");
        run["bc"] = bcs_to_json(problem.grid);
        history = sol.history;
    }

    write_diagnostics(history, out_dir / "diagnostics.csv");
    write_json(run, out_dir / "run.json");
    const Diagnostics& last = history.back();
    out << "wrote " << p + 1 << " frames to " << out_dir.string() << "; objective " << format_double(last.objective)
        << ", constraint residual " << format_double(last.constraint_residual) << '\n';
    return kExitOk;
}

int run_hue_transfer(const std::string& a, const std::string& b, std::size_t bins, const std::string& frames_opt,
                     const fs::path& out_dir, const SolveOptions& o, std::ostream& out, std::ostream& err) {
    o.validate();
    if (bins < 2) throw InvalidParams("--bins must be at least 2");
    const std::string frames = frames_opt.empty() ? "png" : frames_opt;
    if (frames != "png" && frames != "ppm") throw InvalidParams("hue-transfer writes png or ppm frames");

    const RgbImage img0 = load_image(a);
    const RgbImage img1 = load_image(b);
    const HueTransferResult result = hue_transfer(img0, img1, bins, o.steps, o.params(), progress(err));

    ensure_dir(out_dir);
    for (std::size_t k = 0; k < result.rgb_frames.size(); ++k) {
        save_image(result.rgb_frames[k], out_dir / frame_name(k, frames));
    }
    {
        std::ofstream hist(out_dir / "histograms.csv");
        if (!hist) throw IoError("cannot write histograms.csv");
        hist << "frame";
        for (std::size_t b2 = 0; b2 < bins; ++b2) hist << ",bin_" << b2;
        hist << '\n';
        for (std::size_t k = 0; k < result.histograms.size(); ++k) {
            hist << k;
            for (double x : result.histograms[k].bins) hist << ',' << format_double(x);
            hist << '\n';
        }
    }
    const GridSpec grid({{bins, Boundary::Periodic}}, o.steps);
    save_solution(result.solution, grid, out_dir / "solution");
    write_diagnostics(result.solution.history, out_dir / "diagnostics.csv");
    json run = {{"command", "hue-transfer"}, {"frames", frames}, {"bins", bins},
                {"inputs", {fs::absolute(a).string(), fs::absolute(b).string()}}, {"solver", solve_json(o)},
                {"bc", bcs_to_json(grid)}};
    write_json(run, out_dir / "run.json");
    out << "wrote " << result.rgb_frames.size() << " frames to " << out_dir.string() << '\n';
    return kExitOk;
}

TransportProblem problem_from_run(const json& run) {
    const std::string command = run.at("command");
    const std::string a = run.at("inputs").at(0);
    const std::string b = run.at("inputs").at(1);
    const std::size_t steps = run.at("solver").at("steps");
    const auto bcs = bcs_from_json(run.at("bc"));

    if (command == "hue-transfer") {
        const std::size_t bins = run.at("bins");
        const CyclicHistogram h0 = hue_histogram(rgb_to_hsv(load_image(a)), bins);
        const CyclicHistogram h1 = hue_histogram(rgb_to_hsv(load_image(b)), bins);
        NormalizedPair norm = normalize_masses(h0.bins, h1.bins);
        return {GridSpec({{bins, Boundary::Periodic}}, steps), std::move(norm.f0), std::move(norm.f1)};
    }
    if (run.at("mode") == "rgb") {
        const RgbImage img0 = load_image(a);
        const RgbImage img1 = load_image(b);
        if (img0.width != img1.width || img0.height != img1.height) throw DimensionMismatch("images differ in size");
        NormalizedPair norm = normalize_masses(image_to_density(img0), image_to_density(img1));
        return {rgb_grid(img0.width, img0.height, steps, bcs.at(2)), std::move(norm.f0), std::move(norm.f1)};
    }
    const SignalInputs in = load_signal_inputs(a, b);
    NormalizedPair norm = normalize_masses(in.a.data, in.b.data);
    return {signal_grid(in.a.dims, bcs, steps), std::move(norm.f0), std::move(norm.f1)};
}

int run_eval(const fs::path& dir, std::ostream& out) {
    std::ifstream in(dir / "run.json");
    if (!in) throw IoError("no run.json in " + dir.string());
    json run;
    try {
        run = json::parse(in);
    } catch (const json::exception& e) {
        throw IoError((dir / "run.json").string() + ": " + e.what());
    }
    const TransportProblem problem = problem_from_run(run);
    const GridSpec& grid = problem.grid;
    const fs::path sol = dir / "solution";
    const std::size_t cells = grid.cells_per_slice();
    const std::size_t p = grid.time_steps();

    CenteredField f(grid, TimeExtent::Interior, load_values(sol / "density.dten", cells * (p - 1)));
    MomentumField m(grid);
    CenteredPair uv(grid);
    for (std::size_t i = 0; i < grid.dims(); ++i) {
        const auto values = load_values(sol / ("momentum_" + std::to_string(i) + ".dten"), m.component(i).size());
        std::copy(values.begin(), values.end(), m.component(i).begin());
        uv.u[i] = CenteredField(grid, TimeExtent::Full, load_values(sol / ("u_" + std::to_string(i) + ".dten"), cells * p));
    }
    uv.v = CenteredField(grid, TimeExtent::Full, load_values(sol / "v.dten", cells * p));

    const Diagnostics d = evaluate_solution(m, f, uv, problem);
    out << "objective,constraint_residual,coupling_residual\n"
        << format_double(d.objective) << ',' << format_double(d.constraint_residual) << ','
        << format_double(d.coupling_residual) << '\n';
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamic optimal transport between densities, images and hue histograms"};
    app.require_subcommand(1);

    std::string a;
    std::string b;
    std::string mode = "signal";
    std::string bc;
    std::string frames;
    std::string out_dir;
    std::size_t bins = 256;
    SolveOptions opts;

    auto* transport = app.add_subcommand("transport", "Solve the transport between two densities or RGB images");
    transport->add_option("a", a, "Start density (.dten) or image (.png/.ppm)")->required();
    transport->add_option("b", b, "End density (.dten) or image (.png/.ppm)")->required();
    transport->add_option("--mode", mode, "signal or rgb")->capture_default_str();
    transport->add_option("--bc", bc, "Boundary conditions, e.g. 0=periodic,color=neumann");
    transport->add_option("--out", out_dir, "Output directory")->required();
    transport->add_option("--frames", frames, "Frame format: png, ppm or tensor");
    add_solve_options(*transport, opts);

    auto* hue = app.add_subcommand("hue-transfer", "Transport the hue histogram of one image towards another");
    hue->add_option("a", a, "Start image")->required();
    hue->add_option("b", b, "Target image")->required();
    hue->add_option("--bins", bins, "Hue histogram bins")->capture_default_str();
    hue->add_option("--out", out_dir, "Output directory")->required();
    hue->add_option("--frames", frames, "Frame format: png or ppm");
    add_solve_options(*hue, opts);

    std::string eval_dir;
    auto* eval = app.add_subcommand("eval", "Recompute diagnostics of a finished run");
    eval->add_option("dir", eval_dir, "Output directory of a previous run")->required();

    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (*transport) return run_transport(a, b, mode, bc, frames, out_dir, opts, out, err);
        if (*hue) return run_hue_transfer(a, b, bins, frames, out_dir, opts, out, err);
        return run_eval(eval_dir, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const json::exception& e) {
        err << "error: malformed run.json: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace dynot
