#include "srsa/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include "json.hpp"

#include "srsa/analytic.hpp"
#include "srsa/deflection.hpp"
#include "srsa/dynamics.hpp"
#include "srsa/io.hpp"
#include "srsa/observables.hpp"
#include "srsa/plot.hpp"

namespace srsa {

namespace fs = std::filesystem;

std::optional<double> RunReport::value(std::string_view name) const {
    for (const auto& [k, v] : derived)
        if (k == name) return v;
    return std::nullopt;
}

const Comparison* RunReport::comparison(std::string_view quantity) const {
    for (const auto& c : comparisons)
        if (c.quantity == quantity) return &c;
    return nullptr;
}

std::pair<double, std::string> default_t_max(const RunConfig& c) {
    const double b = c.params.collective_coupling();
    const bool underdamped = classify_regime(c.params.epsilon()).regime == Regime::Underdamped;
    if (!underdamped && c.scenario != Scenario::Fig4 && c.scenario != Scenario::Fig5) {
        try {
            const auto d = delay_time(c.ic, c.params);
            const double tau = c.params.emission_time();
            return {d.value + 6.0 * tau, "tau_d + 6 tau"};
        } catch (const Error&) {
            // no delay time on this branch; fall through
        }
    }
    if (!(b > 0)) return {12.0 * c.params.emission_time(), "12 tau (no coupling)"};
    return {12.0 / b, "12/(sqrt(N) g)"};
}

std::vector<double> default_deflection_times(const RunConfig& c) {
    const double b = c.params.collective_coupling();
    std::vector<double> out;
    if (c.scenario == Scenario::Fig5) {
        for (int i = 1; i <= 10; ++i) out.push_back((12.0 * i / 10.0) / b);
    } else if (c.scenario == Scenario::Fig2 || c.scenario == Scenario::Fig3) {
        try {
            out.push_back(delay_time(c.ic, c.params).value + 3.0 * c.params.emission_time());
        } catch (const Error&) {
        }
    }
    return out;
}

namespace {

// Lobes count as resolved when the two shifted amplitudes overlap by at most
// e^{-2}, i.e. the shift is at least 1/σ.
bool lobes_resolved(double shift, double sigma) { return std::abs(shift) * sigma >= 1.0; }

Comparison within_factor(std::string quantity, std::string text, double ref, double computed, std::string unit,
                         double factor, bool asserted, std::string provenance) {
    const double ratio = computed / ref;
    return {std::move(quantity), std::move(text),      ref,      computed, std::move(unit),
            fmt::format("within a factor {}", factor), ratio >= 1.0 / factor && ratio <= factor,
            asserted, std::move(provenance)};
}

Comparison within_rel(std::string quantity, std::string text, double ref, double computed, std::string unit,
                      double rel, bool asserted, std::string provenance) {
    return {std::move(quantity), std::move(text),  ref,    computed, std::move(unit),
            fmt::format("within {:g}%", 100 * rel), std::abs(computed - ref) <= rel * std::abs(ref),
            asserted, std::move(provenance)};
}

double nearest_peak(const std::vector<double>& peaks, double target) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double q : peaks)
        if (std::isnan(best) || std::abs(q - target) < std::abs(best - target)) best = q;
    return best;
}

struct Pipeline {
    const RunConfig& c;
    RunReport r;
    std::vector<Artifact> files;
    std::vector<MomentumDistribution> dists;
    std::string name;

    void add(std::string key, double v) { r.derived.emplace_back(std::move(key), v); }
    void file(std::string n, std::string content) {
        r.artifacts.push_back(n);
        files.push_back({std::move(n), std::move(content)});
    }

    void run();
    void plots(double b, bool underdamped, const std::vector<double>& times, const std::vector<IntensitySample>& series,
               const LienardTrajectory& traj, const std::vector<double>& an_theta, const std::vector<double>& an_alpha);
    void deflection(const std::vector<double>& times, bool underdamped);
    void comparisons(const SeriesSummary& sum, const std::vector<Cycle>& cycles, double b);
};

void Pipeline::run() {
    const auto& p = c.params;
    const auto& ic = c.ic;
    name = std::string(to_string(c.scenario));
    r.scenario = c.scenario;
    const double eps = p.epsilon();
    const auto regime = classify_regime(eps).regime;
    const bool underdamped = regime == Regime::Underdamped;
    r.regime = std::string(to_string(regime));
    r.warnings = config_warnings(c);

    double t_max = 0;
    if (c.t_max) {
        t_max = *c.t_max;
        r.t_max_rule = "configured";
    } else {
        std::tie(t_max, r.t_max_rule) = default_t_max(c);
    }
    const double b = p.collective_coupling();
    add("epsilon", eps);
    add("tau", p.emission_time());
    add("sqrt_n_g", b);
    add("damping", p.damping());
    add("t_max", t_max);

    ode::Settings settings;
    settings.tol = c.tol;
    const auto traj = integrate_lienard(ic, p, 0.0, t_max, settings);
    add("lienard_steps", static_cast<double>(traj.meta().steps));
    const std::vector<double> times =
        c.sample_mode == SampleMode::Uniform ? uniform_times(0.0, t_max, c.samples) : traj.times();

    const auto series = intensity_series(traj, ic, times);
    const auto cycles = detect_cycles(traj);
    const auto sum = summarize(series, 0.0, cycles);
    add("peak_i_atom", sum.peak_value);
    add("peak_time", sum.peak_time);
    add("min_i_field", sum.min_field);
    add("min_i_field_time", sum.min_field_time);
    add("min_i_field_over_peak", sum.min_field / sum.peak_value);
    add("negative_field_intervals", static_cast<double>(sum.n_negative_field_intervals));
    add("negative_field_intervals_1pct",
        static_cast<double>(summarize(series, 1e-2 * std::abs(sum.peak_value)).n_negative_field_intervals));
    double complementarity = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto st = reduced_to_meanfield(traj.at(times[i]), reconstruct_phases(times[i], ic, p));
        const double total = total_intensity(st, p);
        const double scale = std::abs(series[i].i_atom) + std::abs(series[i].i_field);
        if (scale > 0)
            complementarity = std::max(complementarity, std::abs(series[i].i_atom + series[i].i_field - total) / scale);
    }
    add("complementarity_error", complementarity);

    add("cycles", static_cast<double>(cycles.size()));
    if (b > 0) {
        std::size_t within = 0;
        double mean = 0, worst = 0;
        for (const auto& cy : cycles)
            if (cy.start + cy.period <= 10.0 / b) {
                ++within;
                mean += cy.period;
                worst = std::max(worst, std::abs(cy.period * b / 2.0 - 1.0));
            }
        add("cycles_within_10", static_cast<double>(within));
        if (within > 0) {
            add("mean_cycle_period", mean / static_cast<double>(within));
            add("max_period_deviation", worst);
        }
        if (!cycles.empty()) {
            const double end = cycles.front().start + cycles.front().period;
            double peak = 0;
            for (const auto& s : series)
                if (s.t <= end) peak = std::max(peak, s.i_atom);
            add("first_cycle_peak_i_atom", peak);
        }
    }

    std::optional<DelayTime> tau_d;
    if (!underdamped) {
        try {
            tau_d = delay_time(ic, p);
            add("tau_d_root", tau_d->value);
            r.notes.push_back(fmt::format("overdamped branch: {}", to_string(tau_d->branch)));
        } catch (const Error& e) {
            r.notes.push_back(fmt::format("no delay-time root: {}", e.detail()));
        }
        try {
            add("tau_d_log", delay_time_approx(ic, p));
        } catch (const Error& e) {
            r.notes.push_back(fmt::format("log delay-time estimate unavailable: {}", e.detail()));
        }
        add("tau_d_numeric_peak", sum.peak_time);
        for (auto& w : overdamped_warnings(ic, p))
            if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
    }

    // analytic overlay
    std::vector<double> an_theta, an_alpha;
    if (underdamped) {
        const auto sol = UnderdampedSolution::make(ic, p);
        for (double t : times) {
            an_theta.push_back(underdamped_theta(t, sol));
            an_alpha.push_back(std::abs(underdamped_alpha(t, sol, c.alpha_method)));
        }
        const auto ext = detect_extrema(traj);
        auto deviation = [&](double until, bool theta) {
            double worst = 0;
            for (std::size_t i = 0; i < times.size() && times[i] <= until; ++i) {
                const auto s = traj.at(times[i]);
                worst = std::max(worst, theta ? std::abs(an_theta[i] - s.theta) : std::abs(an_alpha[i] - s.alpha_mod()));
            }
            return worst;
        };
        if (ext.size() >= 5) add("analytic_theta_dev_4_cycles", deviation(ext[4], true));
        if (ext.size() >= 3) add("analytic_alpha_dev_2_cycles", deviation(ext[2], false));
    } else if (tau_d) {
        const auto sol = OverdampedSolution::make(ic, p);
        double dth = 0, dal = 0;
        const double until = sol.tau_d + 4.0 * sol.tau;
        for (double t : times) {
            an_theta.push_back(overdamped_theta(t, sol));
            an_alpha.push_back(overdamped_alpha(t, sol));
            if (t <= until) {
                const auto s = traj.at(t);
                dth = std::max(dth, std::abs(an_theta.back() - s.bloch_polar_angle()));
                dal = std::max(dal, std::abs(an_alpha.back() - s.alpha_mod()));
            }
        }
        add("analytic_theta_dev", dth);
        add("analytic_alpha_dev", dal);
    }

    try {
        const auto lr = lr_phases(traj, ic, times);
        add("lr_phase_plus_end", lr.phi_plus.back());
        add("lr_phase_minus_end", lr.phi_minus.back());
        add("lr_phase_field_end", lr.phi_field.back());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateBloch) throw;
        r.notes.push_back(fmt::format("LR phases undefined on this run: {}", e.detail()));
    }

    // full mean-field validation run at a reduced mode frequency
    PhysicalParams mf = p;
    mf.omega = c.meanfield_omega;
    mf.omega0_override.reset();
    const bool polar_start = std::sin(ic.theta0) * std::sin(ic.theta0) / 4 < kDegenerateBlochFloor;
    if (polar_start) {
        r.notes.push_back("full mean-field check skipped: the initial Bloch vector sits on the pole");
    } else if (validity_warnings(mf).empty()) {
        const auto full = integrate_meanfield(initial_meanfield(ic), mf, 0.0, t_max, settings);
        double dth = 0, dal = 0;
        for (double t : times) {
            const auto red = meanfield_to_reduced(full.at(t));
            const auto s = traj.at(t);
            dth = std::max(dth, std::abs(red.theta - s.bloch_polar_angle()));
            dal = std::max(dal, std::abs(red.alpha - s.alpha_mod()));
        }
        const double drift = bloch_radius_drift(full);
        add("meanfield_omega", mf.omega);
        add("meanfield_theta_dev", dth);
        add("meanfield_alpha_dev", dal);
        add("bloch_radius_drift", drift);
        r.notes.push_back(fmt::format("full mean-field check integrated with omega = {:g} g in place of {:g} g",
                                      mf.omega, p.omega));
        if (drift > 1e-3) r.warnings.push_back(fmt::format("Bloch radius drift {:.3g} exceeds 1e-3", drift));
        if (c.formats.csv) file("trajectory_meanfield.csv", trajectory_csv(full, times));
    } else {
        r.notes.push_back(fmt::format("full mean-field check skipped: omega = {:g} g does not separate from N gamma "
                                      "and sqrt(N) g",
                                      mf.omega));
    }

    if (c.formats.csv) {
        file("trajectory.csv", trajectory_csv(traj, times));
        file("intensities.csv", intensities_csv(series));
        if (!an_theta.empty()) {
            std::string s = "t,theta,alpha_mod\n";
            for (std::size_t i = 0; i < times.size(); ++i)
                s += fmt::format("{},{},{}\n", csv_number(times[i]), csv_number(an_theta[i]), csv_number(an_alpha[i]));
            file("analytic.csv", std::move(s));
        }
    }

    // undeflected Gaussian width, always reported
    {
        const auto prof = make_profile(c.sigma, c.normalization, auto_grid(c.sigma, 0.0));
        const auto m = momentum_moments(fourier_amplitude(prof));
        add("momentum_std_undeflected", m.plus.std);
        add("momentum_std_gaussian", gaussian_momentum_std(c.sigma));
    }

    const auto dtimes = c.deflection_times.empty() ? default_deflection_times(c) : c.deflection_times;
    if (!dtimes.empty()) deflection(dtimes, underdamped);

    comparisons(sum, cycles, b);
    plots(b, underdamped, times, series, traj, an_theta, an_alpha);
    add("comparison_rows", static_cast<double>(r.comparisons.size()));
    if (c.formats.json) {
        r.artifacts.push_back("report.json");
        files.push_back({"report.json", report_json(r)});
    }
}

void Pipeline::deflection(const std::vector<double>& times, bool underdamped) {
    const auto& p = c.params;
    const double b = p.collective_coupling();
    std::optional<UnderdampedSolution> usol;
    std::optional<DelayTime> tau_d;
    if (underdamped) {
        usol = UnderdampedSolution::make(c.ic, p);
    } else {
        try {
            tau_d = delay_time(c.ic, p);
        } catch (const Error& e) {
            r.notes.push_back(fmt::format("deflection skipped: {}", e.detail()));
            return;
        }
        add("kappa_limit", kappa_limit(p, c.coupling, c.ic.alpha0));
    }
    auto shift_at = [&](double t) {
        return underdamped ? lobe_momentum(t, p, c.coupling)
                           : c.coupling.k_wave * kappa(t, p, c.coupling, c.ic.alpha0, tau_d->value);
    };
    double max_shift = 0;
    for (double t : times) max_shift = std::max(max_shift, std::abs(shift_at(t)));

    GridSpec grid;
    if (c.grid_n) {
        grid = {c.half_width.value_or(kMinHalfWidthSigmas * c.sigma), *c.grid_n};
    } else {
        grid = auto_grid(c.sigma, max_shift, c.half_width ? *c.half_width / c.sigma : kMinHalfWidthSigmas);
    }
    const auto profile = make_profile(c.sigma, c.normalization, grid, c.coupling.k_wave);
    for (auto& w : profile.warnings())
        if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
    const double norm = profile.norm_sq();
    add("grid_n", static_cast<double>(grid.n));
    add("grid_half_width", grid.half_width);
    add("profile_norm_sq", norm);
    r.notes.push_back(fmt::format("profile normalization: {}", to_string(c.normalization)));

    nlohmann::ordered_json index = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        MomentumDistribution dist;
        DeflectionSample d{};
        d.t = t;
        d.scaled_t = b * t;
        d.shift = shift_at(t);
        d.r = std::numeric_limits<double>::quiet_NaN();
        d.bessel_l2 = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> density(0);
        if (underdamped) {
            const auto env = envelope_at(t, *usol);
            d.r = env.r;
            if (env.r >= 1.0)
                r.warnings.push_back(fmt::format("R(t) < 1 violated: R = {:.6g} at t = {:.6g}/g", env.r, t));
            dist = underdamped_amplitudes_direct(t, profile, p, c.coupling, env);
            d.bessel_l2 =
                l2_distance(dist, underdamped_amplitudes_bessel(t, profile, p, c.coupling, env, c.bessel_form));
            for (std::size_t j = 0; j < dist.p.size(); ++j) density.push_back(dist.density_minus(j));
            const auto peaks = find_peaks(dist.p, density);
            d.lobe_plus = nearest_peak(peaks, d.shift);
            d.lobe_minus = nearest_peak(peaks, -d.shift);
        } else {
            dist = overdamped_momentum_state(t, profile, p, c.ic, c.coupling);
            std::vector<double> dm;
            for (std::size_t j = 0; j < dist.p.size(); ++j) {
                density.push_back(dist.density_plus(j));
                dm.push_back(dist.density_minus(j));
            }
            d.lobe_plus = nearest_peak(find_peaks(dist.p, density), d.shift);
            d.lobe_minus = nearest_peak(find_peaks(dist.p, dm), -d.shift);
        }
        d.resolved = lobes_resolved(d.shift, c.sigma);
        const auto m = momentum_moments(dist);
        d.prob_plus = m.plus.probability;
        d.prob_minus = m.minus.probability;
        d.parseval_error = std::abs(m.total_probability - norm) / norm;
        d.dp = dist.dp();
        d.file = fmt::format("momentum_t{:02}.csv", i);
        if (c.formats.csv) file(d.file, momentum_csv(dist));
        index.push_back({{"file", d.file},
                         {"t", t},
                         {"sqrt_n_g_t", d.scaled_t},
                         {"shift", d.shift},
                         {"R", underdamped ? nlohmann::ordered_json(d.r) : nlohmann::ordered_json(nullptr)},
                         {"probability_plus", d.prob_plus},
                         {"probability_minus", d.prob_minus}});
        r.deflection.push_back(d);
        dists.push_back(std::move(dist));
    }
    if (c.formats.json) file("momentum_index.json", index.dump(2) + "\n");

    double worst_parseval = 0;
    for (const auto& d : r.deflection) worst_parseval = std::max(worst_parseval, d.parseval_error);
    add("parseval_error", worst_parseval);
}

void Pipeline::comparisons(const SeriesSummary& sum, const std::vector<Cycle>& cycles, double b) {
    auto& rows = r.comparisons;
    const double eps = c.params.epsilon();
    const double field_ratio = sum.min_field / sum.peak_value;
    auto negative_present = [&](std::string prov) {
        rows.push_back({"negative field intensity", "field superabsorption presents negative intensity",
                        std::nullopt, field_ratio, "min I_f / peak I_a", "min I_f < 0", field_ratio < 0, true,
                        std::move(prov)});
    };
    switch (c.scenario) {
    case Scenario::Fig2:
        rows.push_back(within_rel("coherence parameter", "epsilon ~ 0.1", 0.1, eps, "", 0.25, true,
                                  "overdamped figure parameters"));
        rows.push_back(within_rel("delay time", "tau_D ~ 2.65e-4 / g", 2.65e-4, *r.value("tau_d_root"), "1/g", 0.2,
                                  false, "overdamped figure discussion"));
        rows.push_back(within_factor("peak atomic intensity", "superradiant pulse of about 1e18 g^2", 1e18,
                                     sum.peak_value, "g^2", 3.0, true, "overdamped figure discussion"));
        rows.push_back({"field superabsorption inhibited", "superabsorption inhibited", std::nullopt, field_ratio,
                        "min I_f / peak I_a", "min I_f >= -1e-2 peak I_a", field_ratio >= -1e-2, true,
                        "overdamped figure discussion"});
        break;
    case Scenario::Fig3: {
        rows.push_back(within_rel("coherence parameter", "epsilon ~ 1", 1.0, eps, "", 0.25, true,
                                  "damped figure parameters"));
        rows.push_back(within_rel("delay time", "tau_D ~ 1.55e-3 / g", 1.55e-3, sum.peak_time, "1/g", 0.2, false,
                                  "damped figure discussion"));
        negative_present("damped figure discussion");
        const auto kl = r.value("kappa_limit");
        if (kl)
            rows.push_back(within_factor("momentum kick", "Delta p ~ +-k", 1.0, c.coupling.k_wave * *kl, "k", 2.0,
                                         false, "damped figure discussion"));
        break;
    }
    case Scenario::Fig4: {
        rows.push_back(within_rel("coherence parameter", "epsilon ~ 10", 10.0, eps, "", 0.25, true,
                                  "underdamped figure parameters"));
        const double within = r.value("cycles_within_10").value_or(0);
        rows.push_back({"cycles within 10/(sqrt(N) g)", "around 4 superradiant-superabsorption cycles", 4.0, within,
                        "", ">= 4", within >= 4, true, "underdamped figure discussion"});
        const auto mean = r.value("mean_cycle_period");
        const auto worst = r.value("max_period_deviation");
        if (mean)
            rows.push_back({"cycle period", "around two times the characteristic emission time", 2.0, *mean * b,
                            "1/(sqrt(N) g)", "each within 25%", worst && *worst <= 0.25, true,
                            "underdamped figure discussion"});
        if (const auto fc = r.value("first_cycle_peak_i_atom"))
            rows.push_back(within_factor("first-cycle peak intensity", "intensities starting at around 1e10 g^2",
                                         1e10, *fc, "g^2", 3.0, true, "underdamped figure discussion"));
        negative_present("underdamped figure discussion");
        (void)cycles;
        break;
    }
    case Scenario::Fig5: {
        rows.push_back(within_rel("coherence parameter", "epsilon ~ 10", 10.0, eps, "", 0.25, true,
                                  "momentum figure parameters"));
        for (const auto& d : r.deflection)
            if (std::abs(d.scaled_t - 6.0) < 1e-9) {
                rows.push_back(within_factor("deflected momentum at sqrt(N) g t = 6", "around 50k", 50.0,
                                             d.lobe_plus, "k", 2.0, false, "momentum figure discussion"));
                add("mu_e_ratio_for_50k", 50.0 / (d.shift / c.coupling.mu_e));
            }
        rows.push_back(within_factor("momentum uncertainty", "around 1/sigma ~ 5k", 1.0 / c.sigma,
                                     *r.value("momentum_std_undeflected"), "k", 2.0, false,
                                     "momentum figure discussion"));
        break;
    }
    case Scenario::Custom: break;
    }
}

void Pipeline::plots(double b, bool underdamped, const std::vector<double>& times,
                     const std::vector<IntensitySample>& series, const LienardTrajectory& traj,
                     const std::vector<double>& an_theta, const std::vector<double>& an_alpha) {
    const std::string xlabel = "sqrt(N) g t";
    const std::string xs = fmt::format("($1*{:.17g})", b);
    std::vector<double> x;
    for (double t : times) x.push_back(b * t);

    if (c.scenario == Scenario::Fig5) {
        for (bool minus : {false, true}) {
            const std::string panel = minus ? "fig5_minus" : "fig5_plus";
            const std::string lbl = minus ? "|F-(p)|^2" : "|F+(p)|^2";
            GnuplotPanel gp{panel, lbl + " at several sqrt(N) g t", "p / k", lbl, {}};
            std::vector<SvgSeries> svg;
            for (const auto& d : r.deflection) {
                gp.curves.push_back({d.file, minus ? "1:7" : "1:6", fmt::format("sqrt(N) g t = {:g}", d.scaled_t)});
            }
            if (c.formats.gnuplot) file(panel + ".gp", gnuplot_script(gp));
            if (c.formats.svg) {
                for (std::size_t k = 0; k < dists.size(); ++k) {
                    SvgSeries ser{fmt::format("sqrt(N) g t = {:g}", r.deflection[k].scaled_t), {}, {}};
                    const auto& d = dists[k];
                    for (std::size_t j = 0; j < d.p.size(); ++j)
                        if (std::abs(d.p[j]) <= 40.0) {
                            ser.x.push_back(d.p[j]);
                            ser.y.push_back(minus ? d.density_minus(j) : d.density_plus(j));
                        }
                    svg.push_back(std::move(ser));
                }
                file(panel + ".svg", svg_plot(gp.title, gp.xlabel, gp.ylabel, svg));
            }
        }
        return;
    }

    const std::string theta_col = underdamped ? "2" : "(abs($2))";
    std::vector<double> th, al, ia, iff;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto s = traj.at(times[i]);
        th.push_back(underdamped ? s.theta : std::abs(s.theta));
        al.push_back(s.alpha_mod());
        ia.push_back(series[i].i_atom);
        iff.push_back(series[i].i_field);
    }
    const bool overlay = !an_theta.empty();

    GnuplotPanel pt{name + "_theta", "Bloch polar angle", xlabel, "theta", {}};
    pt.curves.push_back({"trajectory.csv", xs + ":" + theta_col, "numerical", "points pt 7 ps 0.4"});
    if (overlay) pt.curves.push_back({"analytic.csv", xs + ":2", "analytical"});
    GnuplotPanel pa{name + "_alpha", "coherent amplitude", xlabel, "|alpha|", {}};
    pa.curves.push_back({"trajectory.csv", xs + ":3", "numerical", "points pt 5 ps 0.4"});
    if (overlay) pa.curves.push_back({"analytic.csv", xs + ":3", "analytical"});
    GnuplotPanel pi{name + "_intensity", "atomic and field intensities", xlabel, "intensity (g^2)", {}};
    pi.curves.push_back({"intensities.csv", xs + ":2", "I_a"});
    pi.curves.push_back({"intensities.csv", xs + ":3", "I_f"});
    if (c.formats.gnuplot)
        for (const auto* gp : {&pt, &pa, &pi}) file(gp->name + ".gp", gnuplot_script(*gp));
    if (c.formats.svg) {
        std::vector<SvgSeries> st{{"numerical", x, th}}, sa{{"numerical", x, al}};
        if (overlay) {
            st.push_back({"analytical", x, an_theta});
            sa.push_back({"analytical", x, an_alpha});
        }
        file(pt.name + ".svg", svg_plot(pt.title, xlabel, "theta", st));
        file(pa.name + ".svg", svg_plot(pa.title, xlabel, "|alpha|", sa));
        file(pi.name + ".svg", svg_plot(pi.title, xlabel, "intensity (g^2)", {{"I_a", x, ia}, {"I_f", x, iff}}));
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

} // namespace

ScenarioOutput compute_scenario(const RunConfig& config) {
    Pipeline pl{config, {}, {}, {}, {}};
    try {
        pl.run();
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("scenario {}: {}", to_string(config.scenario), e.detail()));
    }
    return {std::move(pl.r), std::move(pl.files)};
}

RunReport run_scenario(const RunConfig& config) {
    auto out = compute_scenario(config);
    StagedDir stage(config.out_dir);
    for (const auto& a : out.artifacts) write_text(stage.path() / a.name, a.content);
    stage.commit();
    return std::move(out.report);
}

std::string report_json(const RunReport& r) {
    using J = nlohmann::ordered_json;
    J j;
    j["scenario"] = std::string(to_string(r.scenario));
    j["regime"] = r.regime;
    j["t_max_rule"] = r.t_max_rule;
    J derived = J::object();
    for (const auto& [k, v] : r.derived) derived[k] = v;
    j["derived"] = derived;
    j["warnings"] = r.warnings;
    J rows = J::array();
    for (const auto& c : r.comparisons) {
        J row;
        row["quantity"] = c.quantity;
        row["reference"] = c.reference_text;
        row["reference_value"] = c.reference_value ? J(*c.reference_value) : J(nullptr);
        row["computed"] = c.computed;
        row["unit"] = c.unit;
        row["rule"] = c.rule;
        row["agree"] = c.agree ? J(*c.agree) : J(nullptr);
        row["asserted"] = c.asserted;
        row["provenance"] = c.provenance;
        rows.push_back(row);
    }
    j["comparisons"] = rows;
    J defl = J::array();
    for (const auto& d : r.deflection)
        defl.push_back({{"t", d.t},
                        {"sqrt_n_g_t", d.scaled_t},
                        {"R", d.r},
                        {"shift", d.shift},
                        {"lobe_plus", d.lobe_plus},
                        {"lobe_minus", d.lobe_minus},
                        {"resolved", d.resolved},
                        {"probability_plus", d.prob_plus},
                        {"probability_minus", d.prob_minus},
                        {"parseval_error", d.parseval_error},
                        {"bessel_l2", d.bessel_l2},
                        {"dp", d.dp},
                        {"file", d.file}});
    j["deflection"] = defl;
    j["notes"] = r.notes;
    j["artifacts"] = r.artifacts;
    return j.dump(2) + "\n";
}

std::string report_text(const RunReport& r) {
    std::string s = fmt::format("scenario {} ({}), t_max rule: {}\n", to_string(r.scenario), r.regime, r.t_max_rule);
    for (const auto& [k, v] : r.derived) s += fmt::format("  {:<30} {:.6g}\n", k, v);
    for (const auto& w : r.warnings) s += fmt::format("warning: {}\n", w);
    for (const auto& n : r.notes) s += fmt::format("note: {}\n", n);
    if (!r.comparisons.empty()) {
        s += fmt::format("{:<40} {:<14} {:<14} {:<22} {}\n", "quantity", "reference", "computed", "rule", "agree");
        for (const auto& c : r.comparisons)
            s += fmt::format("{:<40} {:<14} {:<14.6g} {:<22} {}{}\n", c.quantity,
                             c.reference_value ? fmt::format("{:.6g}", *c.reference_value) : "-", c.computed, c.rule,
                             c.agree ? (*c.agree ? "yes" : "NO") : "-", c.asserted ? "" : " (reported)");
    }
    return s;
}

std::vector<double> parse_values(std::string_view text) {
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_number(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (out.empty()) throw Error(ErrorCode::ParseError, "empty value list");
    return out;
}

SweepResult sweep(std::span<const ConfigEntry> template_entries, const std::string& axis,
                  std::span<const double> values, const fs::path& out, unsigned workers) {
    if (!is_numeric_key(axis))
        throw Error(ErrorCode::ValidationError, fmt::format("sweep axis '{}' is not a numeric config key", axis));
    if (values.empty()) throw Error(ErrorCode::ValidationError, "sweep needs at least one value");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot create '{}': {}", out.string(), ec.message()));

    SweepResult result{axis, {}, out / "sweep.csv"};
    result.runs.resize(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            SweepRun& run = result.runs[i];
            run.value = values[i];
            run.dir = out / fmt::format("run_{:03}", i);
            std::vector<ConfigEntry> entries(template_entries.begin(), template_entries.end());
            set_entry(entries, axis, fmt::format("{}", values[i]));
            set_entry(entries, "out", run.dir.string());
            try {
                run.report = run_scenario(build_config(entries));
            } catch (const Error& e) {
                run.error_code = e.code();
                run.error = e.what();
            } catch (const std::exception& e) {
                run.error_code = ErrorCode::InvalidArgument;
                run.error = e.what();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(values.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    }

    const std::vector<std::string> cols = {"epsilon",          "tau_d_root",       "peak_i_atom",
                                           "peak_time",        "min_i_field",      "cycles_within_10",
                                           "momentum_std_undeflected"};
    std::string csv = fmt::format("index,{},status,regime", axis);
    for (const auto& col : cols) csv += "," + col;
    csv += ",dir,error\n";
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto& run = result.runs[i];
        csv += fmt::format("{},{},{},{}", i, csv_number(run.value), run.report ? "ok" : "failed",
                           run.report ? run.report->regime : "");
        for (const auto& col : cols) {
            const auto v = run.report ? run.report->value(col) : std::nullopt;
            csv += "," + (v ? csv_number(*v) : std::string());
        }
        csv += fmt::format(",{},{}\n", run.dir.filename().string(), csv_field(run.error));
    }
    fs::path tmp = result.aggregate;
    tmp += ".partial";
    write_text(tmp, csv);
    fs::rename(tmp, result.aggregate, ec);
    if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot write '{}': {}", result.aggregate.string(), ec.message()));
    return result;
}

} // namespace srsa
