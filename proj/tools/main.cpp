// ptbench: command-line front end for the two-arm gain/loss interferometer.
//
// Subcommands: bench (single run), scan (signaling-delta sweep to CSV),
// chsh (Bell-combination maximization), paraxial (resolved-beam vs matrix
// model comparison), preset (show a named parameter set).
//
// Config precedence: built-in defaults < --config JSON file < explicit flags.
// Angles are radians unless --deg is given (flags only; config files are
// always radians). All numbers print with 12 significant digits so repeated
// runs are byte-identical.
//
// Exit codes: 0 success, 1 usage/config errors, 2 broken-phase medium.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptbench/errors.hpp"
#include "ptbench/format.hpp"
#include "ptbench/paraxial.hpp"
#include "ptbench/parallel.hpp"
#include "ptbench/pipeline.hpp"
#include "ptbench/presets.hpp"

using nlohmann::json;
using namespace ptbench;

namespace {

struct Range {
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;

    double at(int i) const {
        return steps < 2 ? start : start + i * (stop - start) / (steps - 1);
    }
};

Range parse_range(const std::string& text) {
    std::istringstream in(text);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
        throw std::invalid_argument("range must be start:stop:steps, got '" + text + "'");
    Range r;
    std::size_t pos = 0;
    r.start = std::stod(a, &pos);
    if (pos != a.size()) throw std::invalid_argument("bad range start '" + a + "'");
    r.stop = std::stod(b, &pos);
    if (pos != b.size()) throw std::invalid_argument("bad range stop '" + b + "'");
    r.steps = std::stoi(c, &pos);
    if (pos != c.size() || r.steps < 1)
        throw std::invalid_argument("range steps must be a positive integer, got '" + c + "'");
    return r;
}

json range_to_json(const Range& r) {
    return json{{"start", r.start}, {"stop", r.stop}, {"steps", r.steps}};
}

Range range_from_json(const json& j) {
    Range r;
    r.start = j.at("start").get<double>();
    r.stop = j.at("stop").get<double>();
    r.steps = j.at("steps").get<int>();
    if (r.steps < 1) throw std::invalid_argument("config: range steps must be >= 1");
    return r;
}

json default_config() {
    json cfg;
    cfg["command"] = "";
    cfg["medium"] = {{"eta1", 0.0}, {"phi1", 0.0}, {"eta2", 1.0}, {"phi2", 0.0}};
    cfg["bench"] = {{"bs_angle", pi / 4},
                    {"bs_phases", {-pi / 2, 0.0, 0.0, -pi / 2}},
                    {"beta", 0.0},
                    {"medium_position", "after_bs"},
                    {"mirror_swap", true}};
    cfg["scan"] = {{"sinalpha", range_to_json({0.1, 0.9, 9})},
                   {"beta", range_to_json({pi / 4, pi / 4, 1})},
                   {"phi2", range_to_json({0.0, 0.0, 1})},
                   {"phi_a", pi / 2},
                   {"phi_b", 0.0}};
    cfg["chsh"] = {{"grid", 50}};
    cfg["paraxial"] = {{"samples", 512},
                       {"half_width", 16.0},
                       {"waist", 1.0},
                       {"dz_frac", 1e-3},
                       {"diffraction", true},
                       {"aperture", 0.0},
                       {"regimes", {1e1, 1e2, 1e3, 1e4, 1e5}}};
    cfg["output"] = "";
    return cfg;
}

PTMediumParams medium_from(const json& cfg) {
    const json& m = cfg.at("medium");
    return PTMediumParams(m.at("eta1").get<double>(), m.at("phi1").get<double>(),
                          m.at("eta2").get<double>(), m.at("phi2").get<double>());
}

ExperimentSettings settings_from(const json& cfg) {
    ExperimentSettings s;
    s.medium = medium_from(cfg);
    const json& b = cfg.at("bench");
    s.bs_angle = b.at("bs_angle").get<double>();
    const auto phases = b.at("bs_phases").get<std::vector<double>>();
    if (phases.size() != 4)
        throw std::invalid_argument("config: bench.bs_phases needs exactly 4 entries");
    std::copy(phases.begin(), phases.end(), s.bs_phases.begin());
    s.hwp_angle = b.at("beta").get<double>();
    const std::string pos = b.at("medium_position").get<std::string>();
    if (pos == "after_bs")
        s.placement = MediumPlacement::AfterSplitter;
    else if (pos == "before_bs")
        s.placement = MediumPlacement::BeforeSplitter;
    else
        throw std::invalid_argument("config: medium_position must be after_bs or before_bs");
    s.use_mirror_swap = b.at("mirror_swap").get<bool>();
    return s;
}

bool canonical_layout(const ExperimentSettings& s) {
    return s.placement == MediumPlacement::AfterSplitter && s.use_mirror_swap &&
           s.bs_phases == default_bs_phases;
}

// Writes either to stdout or to the path in cfg["output"].
void emit(const json& cfg, const std::string& text) {
    const std::string path = cfg.at("output").get<std::string>();
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
    if (!out.flush()) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::string kv(const char* key, double v) {
    return std::string(key) + " = " + fmt12(v) + "\n";
}

int cmd_bench(const json& cfg) {
    const ExperimentSettings s = settings_from(cfg);
    const DetectionRecord rec = run_bench(s);
    const ProbabilityTable p = probabilities(rec);
    std::string out;
    out += kv("w_uh", rec.w_uh);
    out += kv("w_uv", rec.w_uv);
    out += kv("w_lh", rec.w_lh);
    out += kv("w_lv", rec.w_lv);
    out += kv("w_total", rec.total());
    out += kv("p_uh", p.p_uh);
    out += kv("p_uv", p.p_uv);
    out += kv("p_lh", p.p_lh);
    out += kv("p_lv", p.p_lv);
    out += kv("pa_h", p.pa_h);
    out += kv("pa_v", p.pa_v);
    out += kv("pb_u", p.pb_u);
    out += kv("pb_l", p.pb_l);
    if (canonical_layout(s)) {
        const auto closed = p_single_closed_form(s);
        out += kv("closed_form_pa_h", closed.first);
        out += kv("closed_form_residual", std::abs(closed.first - p.pa_h));
    }
    emit(cfg, out);
    return 0;
}

int cmd_scan(const json& cfg) {
    const json& sc = cfg.at("scan");
    const Range r_sa = range_from_json(sc.at("sinalpha"));
    const Range r_beta = range_from_json(sc.at("beta"));
    const Range r_phi2 = range_from_json(sc.at("phi2"));
    const double phi_a = sc.at("phi_a").get<double>();
    const double phi_b = sc.at("phi_b").get<double>();
    for (int i = 0; i < r_sa.steps; ++i) {
        const double v = r_sa.at(i);
        if (!(v >= 0.0 && v < 1.0))
            throw std::invalid_argument("scan: sinalpha values must lie in [0, 1)");
    }

    const std::size_t rows = static_cast<std::size_t>(r_sa.steps) * r_beta.steps * r_phi2.steps;
    std::vector<std::string> lines(rows);
    parallel_for(rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const int ip2 = static_cast<int>(idx) % r_phi2.steps;
            const int ib = static_cast<int>(idx / r_phi2.steps) % r_beta.steps;
            const int is = static_cast<int>(idx / r_phi2.steps / r_beta.steps);
            const double sa = r_sa.at(is);
            const double beta = r_beta.at(ib);
            const double phi2 = r_phi2.at(ip2);
            // sin(alpha) maps onto the medium as eta1 = sa, phi1 = pi/2,
            // eta2 = 1; unbroken for every sa in [0, 1).
            const PTMediumParams medium(sa, pi / 2, 1.0, phi2);
            const double delta = signaling_delta(medium, beta, phi_a, phi_b);
            lines[idx] = fmt12(sa) + "," + fmt12(beta) + "," + fmt12(phi2) + "," + fmt12(delta) + "\n";
        }
    });

    std::string out = "sin_alpha,beta,phi2,delta\n";
    for (const auto& l : lines) out += l;
    emit(cfg, out);
    return 0;
}

int cmd_chsh(const json& cfg) {
    const PTMediumParams medium = medium_from(cfg);
    const int grid = cfg.at("chsh").at("grid").get<int>();
    const ChshSearchResult res = max_chsh(medium, grid);
    const double bound = chsh_bound(medium);
    std::string out;
    out += kv("s_max", res.s_max);
    out += kv("phi_1", res.settings[0]);
    out += kv("beta_1", res.settings[1]);
    out += kv("phi_2", res.settings[2]);
    out += kv("beta_2", res.settings[3]);
    out += kv("bound", bound);
    out += kv("bound_residual", bound - res.s_max);
    emit(cfg, out);
    return 0;
}

int cmd_paraxial(const json& cfg) {
    ExperimentSettings s = settings_from(cfg);
    const json& px = cfg.at("paraxial");
    const int samples = px.at("samples").get<int>();
    const double half_width = px.at("half_width").get<double>();
    const double waist = px.at("waist").get<double>();
    const double dz_frac = px.at("dz_frac").get<double>();
    const bool diffraction = px.at("diffraction").get<bool>();
    const double aperture = px.at("aperture").get<double>();
    const auto regimes = px.at("regimes").get<std::vector<double>>();
    if (!(dz_frac > 0.0)) throw std::invalid_argument("paraxial: dz_frac must be > 0");
    if (aperture < 0.0) throw std::invalid_argument("paraxial: aperture must be >= 0");

    const TransverseGrid grid(samples, half_width);
    const DerivedMedium derived = derive(s.medium);

    PropagationConfig pc;
    pc.medium = s.medium;
    pc.dz = dz_frac * derived.length;
    pc.include_diffraction = diffraction;
    if (aperture > 0.0) {
        // Smooth super-Gaussian envelope of the coupling region; makes the
        // diffraction and coupling steps non-commuting.
        pc.coupling_profile.resize(grid.samples);
        for (int j = 0; j < grid.samples; ++j) {
            const double u = grid.x(j) / aperture;
            pc.coupling_profile[j] = std::exp(-(u * u * u * u));
        }
    }

    std::string out =
        "kw2_over_l,wave_number,max_abs_diff,"
        "p_uh_matrix,p_uh_field,p_uv_matrix,p_uv_field,"
        "p_lh_matrix,p_lh_field,p_lv_matrix,p_lv_field\n";
    for (const double q : regimes) {
        if (!(q > 0.0)) throw std::invalid_argument("paraxial: regimes must be > 0");
        pc.wave_number = q * derived.length / (waist * waist);
        const MatrixModelReport rep = validate_matrix_model(s, pc, grid, waist);
        out += fmt12(q);
        out += "," + fmt12(pc.wave_number);
        out += "," + fmt12(rep.max_abs_diff);
        for (int n = 0; n < 2; ++n)
            for (int j = 0; j < 2; ++j)
                out += "," + fmt12(rep.p_matrix[n][j]) + "," + fmt12(rep.p_field[n][j]);
        out += "\n";
    }
    emit(cfg, out);
    return 0;
}

int cmd_preset(const json& cfg, const std::string& name) {
    const auto medium = preset_by_name(name);
    if (!medium) {
        std::string names;
        for (const auto n : preset_names()) names += std::string(n) + " ";
        throw std::invalid_argument("unknown preset '" + name + "'; available: " + names);
    }
    const DerivedMedium d = derive(*medium);
    std::string out;
    out += "preset = " + name + "\n";
    out += kv("eta1", medium->eta1);
    out += kv("phi1", medium->phi1);
    out += kv("eta2", medium->eta2);
    out += kv("phi2", medium->phi2);
    out += kv("sin_alpha", d.sin_alpha());
    out += kv("alpha", d.alpha);
    out += kv("length", d.length);
    out += kv("global_phase", d.global_phase);
    out += kv("chsh_bound", chsh_bound(*medium));
    emit(cfg, out);
    return 0;
}

// Flag storage shared by the subcommands; option pointers tell us what was
// actually passed so flags can override the config file.
struct Flags {
    std::string config_path;
    bool dump = false;
    bool deg = false;
    std::string output;
    std::string preset;
    double eta1 = 0, phi1 = 0, eta2 = 0, phi2 = 0;
    double r = 0, phi_bs = 0, beta = 0;
    std::vector<double> bs_phases;
    std::string medium_position;
    bool no_mirror_swap = false;
    std::string sc_sinalpha, sc_beta, sc_phi2;
    double phi_a = 0, phi_b = 0;
    int grid = 0;
    int samples = 0;
    double half_width = 0, waist = 0, dz_frac = 0, aperture = 0;
    std::vector<double> regimes;
    bool no_diffraction = false;
    std::string preset_name; // positional of the preset subcommand

    CLI::Option *o_config = nullptr, *o_output = nullptr, *o_preset = nullptr;
    CLI::Option *o_eta1 = nullptr, *o_phi1 = nullptr, *o_eta2 = nullptr, *o_phi2 = nullptr;
    CLI::Option *o_r = nullptr, *o_phi_bs = nullptr, *o_beta = nullptr, *o_bs_phases = nullptr;
    CLI::Option *o_medium_position = nullptr, *o_no_mirror_swap = nullptr;
    CLI::Option *o_sc_sinalpha = nullptr, *o_sc_beta = nullptr, *o_sc_phi2 = nullptr;
    CLI::Option *o_phi_a = nullptr, *o_phi_b = nullptr;
    CLI::Option *o_grid = nullptr;
    CLI::Option *o_samples = nullptr, *o_half_width = nullptr, *o_waist = nullptr;
    CLI::Option *o_dz_frac = nullptr, *o_aperture = nullptr, *o_regimes = nullptr;
    CLI::Option *o_no_diffraction = nullptr;
};

void add_common(CLI::App* sub, Flags& f) {
    f.o_config = sub->add_option("--config", f.config_path, "JSON config file; flags override it");
    sub->add_flag("--dump-config", f.dump, "print the merged config as JSON and exit");
    sub->add_flag("--deg", f.deg, "interpret angle flags as degrees");
    f.o_output = sub->add_option("--output", f.output, "write results to a file instead of stdout");
}

void add_medium(CLI::App* sub, Flags& f) {
    f.o_preset = sub->add_option("--preset", f.preset, "named medium preset (fig2)");
    f.o_eta1 = sub->add_option("--eta1", f.eta1, "gain/loss strength");
    f.o_phi1 = sub->add_option("--phi1", f.phi1, "gain/loss phase");
    f.o_eta2 = sub->add_option("--eta2", f.eta2, "channel coupling strength");
    f.o_phi2 = sub->add_option("--phi2", f.phi2, "channel coupling phase");
}

void add_bench_settings(CLI::App* sub, Flags& f) {
    f.o_r = sub->add_option("--r", f.r, "splitter reflectivity in [0, 1]")
                ->check(CLI::Range(0.0, 1.0));
    f.o_phi_bs = sub->add_option("--phi-bs", f.phi_bs, "splitter mixing angle (r = sin, t = cos)");
    f.o_r->excludes(f.o_phi_bs);
    f.o_phi_bs->excludes(f.o_r);
    f.o_beta = sub->add_option("--beta", f.beta, "waveplate rotation angle");
    f.o_bs_phases = sub->add_option("--bs-phases", f.bs_phases, "four splitter phases th1..th4")
                        ->expected(4);
    f.o_medium_position =
        sub->add_option("--medium-position", f.medium_position, "after_bs or before_bs")
            ->check(CLI::IsMember({"after_bs", "before_bs"}));
    f.o_no_mirror_swap =
        sub->add_flag("--no-mirror-swap", f.no_mirror_swap, "skip the arm exchange after the medium");
}

// Overlay everything the user passed onto the config, converting degree-flag
// angles to radians where needed.
void apply_flags(json& cfg, const Flags& f) {
    const double ang = f.deg ? pi / 180.0 : 1.0;
    if (f.o_output && f.o_output->count()) cfg["output"] = f.output;
    if (f.o_preset && f.o_preset->count()) {
        const auto m = preset_by_name(f.preset);
        if (!m) throw std::invalid_argument("unknown preset '" + f.preset + "'");
        cfg["medium"] = {{"eta1", m->eta1}, {"phi1", m->phi1}, {"eta2", m->eta2}, {"phi2", m->phi2}};
    }
    if (f.o_eta1 && f.o_eta1->count()) cfg["medium"]["eta1"] = f.eta1;
    if (f.o_phi1 && f.o_phi1->count()) cfg["medium"]["phi1"] = f.phi1 * ang;
    if (f.o_eta2 && f.o_eta2->count()) cfg["medium"]["eta2"] = f.eta2;
    if (f.o_phi2 && f.o_phi2->count()) cfg["medium"]["phi2"] = f.phi2 * ang;
    if (f.o_r && f.o_r->count()) cfg["bench"]["bs_angle"] = std::asin(f.r);
    if (f.o_phi_bs && f.o_phi_bs->count()) cfg["bench"]["bs_angle"] = f.phi_bs * ang;
    if (f.o_beta && f.o_beta->count()) cfg["bench"]["beta"] = f.beta * ang;
    if (f.o_bs_phases && f.o_bs_phases->count()) {
        json phases = json::array();
        for (const double th : f.bs_phases) phases.push_back(th * ang);
        cfg["bench"]["bs_phases"] = phases;
    }
    if (f.o_medium_position && f.o_medium_position->count())
        cfg["bench"]["medium_position"] = f.medium_position;
    if (f.o_no_mirror_swap && f.o_no_mirror_swap->count()) cfg["bench"]["mirror_swap"] = false;
    if (f.o_sc_sinalpha && f.o_sc_sinalpha->count())
        cfg["scan"]["sinalpha"] = range_to_json(parse_range(f.sc_sinalpha));
    if (f.o_sc_beta && f.o_sc_beta->count()) {
        Range r = parse_range(f.sc_beta);
        r.start *= ang;
        r.stop *= ang;
        cfg["scan"]["beta"] = range_to_json(r);
    }
    if (f.o_sc_phi2 && f.o_sc_phi2->count()) {
        Range r = parse_range(f.sc_phi2);
        r.start *= ang;
        r.stop *= ang;
        cfg["scan"]["phi2"] = range_to_json(r);
    }
    if (f.o_phi_a && f.o_phi_a->count()) cfg["scan"]["phi_a"] = f.phi_a * ang;
    if (f.o_phi_b && f.o_phi_b->count()) cfg["scan"]["phi_b"] = f.phi_b * ang;
    if (f.o_grid && f.o_grid->count()) cfg["chsh"]["grid"] = f.grid;
    if (f.o_samples && f.o_samples->count()) cfg["paraxial"]["samples"] = f.samples;
    if (f.o_half_width && f.o_half_width->count()) cfg["paraxial"]["half_width"] = f.half_width;
    if (f.o_waist && f.o_waist->count()) cfg["paraxial"]["waist"] = f.waist;
    if (f.o_dz_frac && f.o_dz_frac->count()) cfg["paraxial"]["dz_frac"] = f.dz_frac;
    if (f.o_aperture && f.o_aperture->count()) cfg["paraxial"]["aperture"] = f.aperture;
    if (f.o_regimes && f.o_regimes->count()) cfg["paraxial"]["regimes"] = f.regimes;
    if (f.o_no_diffraction && f.o_no_diffraction->count()) cfg["paraxial"]["diffraction"] = false;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-arm gain/loss interferometer bench"};
    app.set_version_flag("--version", "ptbench 1.0.0");
    app.require_subcommand(1);

    Flags bench_f, scan_f, chsh_f, paraxial_f, preset_f;

    CLI::App* bench = app.add_subcommand("bench", "run the bench once and print the statistics");
    add_common(bench, bench_f);
    add_medium(bench, bench_f);
    add_bench_settings(bench, bench_f);

    CLI::App* scan = app.add_subcommand("scan", "sweep the signaling delta to CSV");
    add_common(scan, scan_f);
    scan_f.o_sc_sinalpha =
        scan->add_option("--sinalpha", scan_f.sc_sinalpha, "sin(alpha) range start:stop:steps");
    scan_f.o_sc_beta = scan->add_option("--beta", scan_f.sc_beta, "waveplate range start:stop:steps");
    scan_f.o_sc_phi2 =
        scan->add_option("--phi2", scan_f.sc_phi2, "coupling-phase range start:stop:steps");
    scan_f.o_phi_a = scan->add_option("--phi-a", scan_f.phi_a, "first remote splitter angle");
    scan_f.o_phi_b = scan->add_option("--phi-b", scan_f.phi_b, "second remote splitter angle");

    CLI::App* chsh = app.add_subcommand("chsh", "maximize the Bell combination |S|");
    add_common(chsh, chsh_f);
    add_medium(chsh, chsh_f);
    chsh_f.o_grid = chsh->add_option("--grid", chsh_f.grid, "grid points per setting axis")
                        ->check(CLI::Range(2, 1000));

    CLI::App* paraxial =
        app.add_subcommand("paraxial", "compare resolved-beam propagation with the matrix model");
    add_common(paraxial, paraxial_f);
    add_medium(paraxial, paraxial_f);
    add_bench_settings(paraxial, paraxial_f);
    paraxial_f.o_samples =
        paraxial->add_option("--samples", paraxial_f.samples, "transverse samples (power of two)");
    paraxial_f.o_half_width =
        paraxial->add_option("--half-width", paraxial_f.half_width, "transverse half width");
    paraxial_f.o_waist = paraxial->add_option("--waist", paraxial_f.waist, "beam waist");
    paraxial_f.o_dz_frac =
        paraxial->add_option("--dz-frac", paraxial_f.dz_frac, "step size as a fraction of the medium length");
    paraxial_f.o_aperture = paraxial->add_option(
        "--aperture", paraxial_f.aperture, "coupling envelope width (0 = uniform medium)");
    paraxial_f.o_regimes =
        paraxial
            ->add_option("--regimes", paraxial_f.regimes, "k w^2 / length values to sweep")
            ->delimiter(',');
    paraxial_f.o_no_diffraction =
        paraxial->add_flag("--no-diffraction", paraxial_f.no_diffraction, "disable the diffraction steps");

    CLI::App* preset = app.add_subcommand("preset", "print a named parameter set");
    add_common(preset, preset_f);
    preset->add_option("name", preset_f.preset_name, "preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    Flags* flags = nullptr;
    if (sub == bench) flags = &bench_f;
    else if (sub == scan) flags = &scan_f;
    else if (sub == chsh) flags = &chsh_f;
    else if (sub == paraxial) flags = &paraxial_f;
    else flags = &preset_f;

    try {
        json cfg = default_config();
        cfg["command"] = sub->get_name();
        if (flags->o_config && flags->o_config->count()) {
            std::ifstream in(flags->config_path);
            if (!in) throw std::runtime_error("cannot open config file '" + flags->config_path + "'");
            json loaded = json::parse(in);
            if (!loaded.is_object()) throw std::invalid_argument("config: top level must be an object");
            loaded.erase("command"); // the subcommand always comes from argv
            cfg.update(loaded, /*merge_objects=*/true);
        }
        apply_flags(cfg, *flags);
        if (flags->dump) {
            std::cout << cfg.dump(2) << "\n";
            return 0;
        }
        if (sub == bench) return cmd_bench(cfg);
        if (sub == scan) return cmd_scan(cfg);
        if (sub == chsh) return cmd_chsh(cfg);
        if (sub == paraxial) return cmd_paraxial(cfg);
        return cmd_preset(cfg, preset_f.preset_name);
    } catch (const BrokenPhaseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
