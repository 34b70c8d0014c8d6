// Command-line runner for the backscattering inversion workflow.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "bsl/asymptotics.hpp"
#include "bsl/error.hpp"
#include "bsl/experiment.hpp"

namespace fs = std::filesystem;
using namespace bsl;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::exception& e, bool numerical)
        : std::runtime_error("stage '" + stage + "' failed: " + e.what()), numerical(numerical)
    {
    }
    bool numerical;
};

template <typename Fn>
auto stage(const std::string& name, nlohmann::json& timing, Fn&& fn)
{
    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto out = fn();
        timing[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    } catch (const NumericalError& e) {
        throw StageError(name, e, true);
    } catch (const std::exception& e) {
        throw StageError(name, e, false);
    }
}

nlohmann::json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

BoundaryCurve load_shape(const std::string& shape)
{
    if (shape == "egg") {
        return egg::curve();
    }
    if (shape == "circle") {
        return BoundaryCurve::circle(1.0);
    }
    return curve_from_json(read_json(shape));
}

ImpedanceModel make_bc(const std::string& bc, const std::string& gamma)
{
    if (bc == "dirichlet") {
        return ImpedanceModel::dirichlet();
    }
    if (bc == "neumann") {
        return ImpedanceModel::neumann();
    }
    if (bc == "robin") {
        std::size_t used = 0;
        double g = 0.0;
        try {
            g = std::stod(gamma, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != gamma.size()) {
            throw DomainError("--gamma must be a number for --bc robin, got '" + gamma + "'");
        }
        return ImpedanceModel::robin_constant(g);
    }
    if (bc == "robin-var") {
        return impedance_preset(gamma.empty() ? "3+sin(t)" : gamma);
    }
    throw DomainError("unknown --bc '" + bc + "' (dirichlet, neumann, robin, robin-var)");
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) {
            throw DomainError("bad number '" + item + "' in list");
        }
    }
    if (out.empty()) {
        throw DomainError("empty list");
    }
    return out;
}

void write_points(const fs::path& path, const std::vector<Point>& pts)
{
    std::ofstream out(path);
    out.precision(12);
    out << "x,y\n";
    for (const Point& p : pts) {
        out << p.x() << ',' << p.y() << '\n';
    }
}

struct GenerateArgs {
    std::string shape = "egg";
    std::string bc = "dirichlet";
    std::string gamma;
    MeasurementConfig config;
    std::string engine = "nystrom";
    std::string out = "out";
};

int cmd_generate(const GenerateArgs& a)
{
    const BoundaryCurve curve = load_shape(a.shape);
    const ImpedanceModel bc = make_bc(a.bc, a.gamma);
    a.config.validate();
    if (!a.config.resolves_range()) {
        std::cerr << "warning: dk = " << a.config.dk << " is not below pi/(4R) = " << std::numbers::pi / (4.0 * a.config.radius)
                  << "; the indicator's range response may alias\n";
    }
    fs::create_directories(a.out);
    nlohmann::json timing;
    const ScatteringDataset clean =
        stage("generate", timing, [&] { return generate(curve, bc, a.config, engine_from_string(a.engine)); });
    const ScatteringDataset ds = stage("noise", timing, [&] { return add_noise(clean, a.config.noise_level, a.config.seed); });
    save(ds, fs::path(a.out) / "dataset.json");
    export_csv(ds, fs::path(a.out) / "dataset.csv");
    write_json(fs::path(a.out) / "true_boundary.json", nlohmann::json(curve));
    write_json(fs::path(a.out) / "timing_generate.json", timing);
    std::cout << "wrote " << (fs::path(a.out) / "dataset.json").string() << " (" << ds.values.rows() << " x "
              << ds.values.cols() << ")\n";
    return 0;
}

struct ReconstructArgs {
    std::string data;
    InversionOptions opt;
    std::string true_boundary;
    std::string out = "out";
};

int cmd_reconstruct(const ReconstructArgs& a)
{
    const ScatteringDataset ds = load(a.data);
    if (ds.values.size() == 0) {
        throw DomainError("dataset is empty");
    }
    const fs::path out(a.out);
    fs::create_directories(out);
    nlohmann::json timing;

    std::optional<BoundaryCurve> boundary;
    ReconstructionResult result{std::nullopt, std::nullopt, std::nullopt, BoundaryCurve::circle(1.0), {}};
    if (!a.true_boundary.empty()) {
        boundary = curve_from_json(read_json(a.true_boundary));
    } else {
        const IndicatorField field = stage("indicator", timing, [&] {
            return indicator_total(ds, ImagingGrid::square(a.opt.grid_half_width, a.opt.grid_points));
        });
        export_csv(field, out / "indicator.csv");
        const ReferencePointSet refs =
            stage("reference_points", timing, [&] { return extract_reference_points(field, a.opt.rho); });
        write_points(out / "reference_points.csv", refs.points);
        const ShapeObjectiveReport shape = stage("shape", timing, [&] { return optimize_shape(refs, a.opt.shape); });
        write_json(out / "shape_report.json", to_json(shape));
        boundary = shape.curve;
        result.field = field;
        result.refs = refs;
        result.shape = shape;
    }
    write_json(out / "boundary.json", nlohmann::json(*boundary));
    result.boundary = *boundary;
    result.recovery = stage("impedance", timing, [&] {
        return recover_impedance(recover_quotients(ds, *boundary), a.opt.tau_q, a.opt.legendre_degree);
    });
    write_json(out / "recovery.json", to_json(result.recovery));
    export_csv(result.recovery, out / "recovery.csv");
    for (const std::string& w : result.recovery.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (ds.truth) {
        const MetricsReport m = stage("metrics", timing, [&] { return compute_metrics(result, *ds.truth); });
        write_json(out / "metrics.json", to_json(m));
        std::cout << to_json(m).dump(2) << '\n';
    }
    write_json(out / "timing.json", timing);
    return 0;
}

struct ValidateArgs {
    std::string shape = "circle";
    std::string bc = "dirichlet";
    std::string gamma;
    std::string ks = "20,40,80";
    double radius = 5.0;
    std::string out;
};

int cmd_validate(const ValidateArgs& a)
{
    if (a.shape != "circle" && a.shape != "egg") {
        throw DomainError("--shape must be circle or egg for validate-asymptotics");
    }
    const BoundaryCurve curve = load_shape(a.shape);
    const ImpedanceModel bc = make_bc(a.bc, a.gamma);
    const Point x(a.radius, 0.0);
    std::ostringstream table;
    table << "k,u_ref_re,u_ref_im,u_asym_re,u_asym_im,rel_error\n";
    std::cout << std::setw(8) << "k" << std::setw(16) << "|u_ref|" << std::setw(16) << "|u_asym|" << std::setw(14)
              << "rel_error" << '\n';
    for (double k : parse_list(a.ks)) {
        cplx ref;
        if (a.shape == "circle") {
            ref = mie_circle_oracle(1.0, Point::Zero(), k, bc, x, x).value;
        } else {
            const auto sys = NystromSystem::assemble(curve, k, bc, default_quadrature_size(curve, k));
            ref = sys.evaluate(sys.solve(x), x);
        }
        const cplx asym = predict_backscatter(curve, bc, x, k).leading;
        const double scale = std::abs(asym);
        const bool vanishing = scale <= 1e-12 * std::abs(ref);
        const double rel = vanishing ? std::numeric_limits<double>::infinity() : std::abs(ref - asym) / scale;
        table << std::setprecision(17) << k << ',' << ref.real() << ',' << ref.imag() << ',' << asym.real() << ','
              << asym.imag() << ',' << rel << '\n';
        std::cout << std::setw(8) << k << std::setw(16) << std::setprecision(6) << std::abs(ref) << std::setw(16)
                  << scale << std::setw(14) << rel << (vanishing ? "  leading term vanishes (gamma = 1)" : "") << '\n';
    }
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream(fs::path(a.out) / "asymptotics.csv") << table.str();
    }
    return 0;
}

struct MetricsArgs {
    std::string data;
    std::string result;
};

int cmd_metrics(const MetricsArgs& a)
{
    const ScatteringDataset ds = load(a.data);
    if (!ds.truth) {
        throw DomainError("dataset carries no ground truth");
    }
    const fs::path dir(a.result);
    const nlohmann::json rec = read_json(dir / "recovery.json");
    const BoundaryCurve boundary = curve_from_json(read_json(dir / "boundary.json"));
    ReconstructionResult result{std::nullopt, std::nullopt, std::nullopt, boundary, {}};
    if (fs::exists(dir / "shape_report.json")) {
        ShapeObjectiveReport shape{boundary, 0.0, 0, false, {}, {}, {}};
        result.shape = shape;
    }
    const int degree = rec.contains("legendre") && rec.at("legendre").is_object()
                           ? static_cast<int>(rec.at("legendre").at("coefficients").size()) - 1
                           : 5;
    result.recovery = recover_impedance(recover_quotients(ds, boundary), rec.at("tau_q").get<double>(), std::max(degree, 0));
    std::cout << to_json(compute_metrics(result, *ds.truth)).dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Shape and impedance reconstruction from multi-frequency near-field backscattering data"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "simulate a backscattering dataset");
    g->add_option("--shape", gen.shape, "egg, circle or a curve JSON file")->capture_default_str();
    g->add_option("--bc", gen.bc, "dirichlet, neumann, robin, robin-var")->capture_default_str();
    g->add_option("--gamma", gen.gamma, "impedance value (robin) or profile name (robin-var, default 3+sin(t))");
    g->add_option("--R", gen.config.radius, "measurement circle radius")->capture_default_str();
    g->add_option("--ns", gen.config.n_sources, "number of sources")->capture_default_str();
    g->add_option("--kmin", gen.config.k_min)->capture_default_str();
    g->add_option("--kmax", gen.config.k_max)->capture_default_str();
    g->add_option("--dk", gen.config.dk)->capture_default_str();
    g->add_option("--noise", gen.config.noise_level, "relative noise level")->capture_default_str();
    g->add_option("--seed", gen.config.seed, "noise seed")->capture_default_str();
    g->add_option("--engine", gen.engine, "nystrom or asymptotic")->capture_default_str();
    g->add_option("--out", gen.out, "output directory")->capture_default_str();

    ReconstructArgs rec;
    auto* r = app.add_subcommand("reconstruct", "run the three inversion steps on a dataset");
    r->add_option("data", rec.data, "dataset JSON")->required();
    r->add_option("--rho", rec.opt.rho, "indicator threshold")->capture_default_str();
    r->add_option("--order,--fourier-order", rec.opt.shape.order, "Fourier order M")->capture_default_str();
    r->add_option("--w-in", rec.opt.shape.w_in)->capture_default_str();
    r->add_option("--w-out", rec.opt.shape.w_out)->capture_default_str();
    r->add_option("--max-iters", rec.opt.shape.max_iterations)->capture_default_str();
    r->add_option("--grid", rec.opt.grid_points, "grid points per side on [-3,3]^2")->capture_default_str();
    r->add_option("--tau-q", rec.opt.tau_q, "classification margin")->capture_default_str();
    r->add_option("--true-boundary", rec.true_boundary, "curve JSON; skips steps 1-2");
    r->add_option("--out", rec.out, "output directory")->capture_default_str();

    ValidateArgs val;
    auto* v = app.add_subcommand("validate-asymptotics", "compare the backscatter expansion with the forward solver");
    v->add_option("--shape", val.shape, "circle or egg")->capture_default_str();
    v->add_option("--bc", val.bc)->capture_default_str();
    v->add_option("--gamma", val.gamma);
    v->add_option("--k", val.ks, "comma-separated wavenumbers")->capture_default_str();
    v->add_option("--R", val.radius, "receiver distance from the origin")->capture_default_str();
    v->add_option("--out", val.out, "directory for asymptotics.csv");

    MetricsArgs met;
    auto* m = app.add_subcommand("metrics", "recompute metrics from stored artifacts");
    m->add_option("data", met.data, "dataset JSON with ground truth")->required();
    m->add_option("--result", met.result, "reconstruct output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*g) {
            return cmd_generate(gen);
        }
        if (*r) {
            return cmd_reconstruct(rec);
        }
        if (*v) {
            return cmd_validate(val);
        }
        return cmd_metrics(met);
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.numerical ? kExitNumerical : kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
