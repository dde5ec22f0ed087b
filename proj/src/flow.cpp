#include "roadwork/flow.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"

#include <cmath>

namespace roadwork::flow {

double classic_volume(double u_kmh, const ClassicModelParams& p) {
    if (!(p.jam_density_pcu_km > 0) || !(p.zero_flow_speed_kmh > 0))
        throw InputError("classic model parameters must be positive");
    if (u_kmh < 0 || u_kmh > p.zero_flow_speed_kmh)
        throw InputError("speed outside [0, U_0]: " + util::format_double(u_kmh));
    return p.jam_density_pcu_km * (u_kmh - u_kmh * u_kmh / p.zero_flow_speed_kmh);
}

void validate(const FlowModelParams& p) {
    if (!(p.alpha1 > 0) || !(p.alpha2 > 0) || !(p.alpha3 > 0))
        throw InputError("flow model alphas must be positive");
    if (!(p.u_s_kmh > 0)) throw InputError("flow model U_s must be positive");
    if (!(p.capacity_pcu_h_ln > 0)) throw InputError("flow model capacity must be positive");
}

double practical_speed(double x, const FlowModelParams& p) {
    validate(p);
    if (x < 0) throw InputError("volume-capacity ratio must be >= 0");
    if (x == 0) return p.alpha1 * p.u_s_kmh;   // free-flow limit
    const double beta = p.alpha2 + p.alpha3 * x * x * x;
    return p.alpha1 * p.u_s_kmh / (1.0 + std::exp(beta * std::log(x)));
}

double invert_practical(double u_kmh, const FlowModelParams& p, double x_max) {
    validate(p);
    const double free_flow = p.alpha1 * p.u_s_kmh;
    if (!(u_kmh > 0) || !(u_kmh < free_flow))
        throw InputError("speed must lie in (0, alpha1*U_s) to invert: " +
                         util::format_double(u_kmh));
    if (u_kmh == free_flow / 2.0) return p.capacity_pcu_h_ln;   // x = 1 closed form
    if (!(practical_speed(x_max, p) < u_kmh))
        throw InputError("x_max too small to bracket the target speed");

    double lo = 0.0, hi = x_max;   // speed(lo) > u > speed(hi)
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (practical_speed(mid, p) > u_kmh)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) * p.capacity_pcu_h_ln;
}

double free_flow_speed(const BaseCapacityInputs& in) {
    const double v = in.v_bff_kmh + in.delta_v_w_kmh + in.delta_v_n_kmh;
    if (!(v > 0)) throw InputError("corrected free-flow speed must be positive");
    return v;
}

BaseCapacity base_capacity(const BaseCapacityInputs& in) {
    if (!(in.c_b_pcu_h > 0)) throw InputError("baseline capacity must be positive");
    if (!(in.f_hv > 0 && in.f_hv <= 1) || !(in.f_p > 0 && in.f_p <= 1))
        throw InputError("capacity factors must lie in (0, 1]");
    if (in.lanes < 1) throw InputError("lane count must be >= 1");
    BaseCapacity out;
    out.per_lane_pcu_h = in.c_b_pcu_h * in.f_hv * in.f_p;
    out.directional_pcu_h = out.per_lane_pcu_h * in.lanes;
    return out;
}

WorkZoneCapacity workzone_capacity(const WorkZoneCapacityInputs& in) {
    if (!(in.c_bs_pcu_h_ln > 0)) throw InputError("work-zone baseline capacity must be positive");
    for (double f : {in.f_n, in.f_lw, in.f_lc, in.f_hv, in.f_se, in.f_wi, in.f_ls})
        if (!(f > 0 && f <= 1.2))
            throw InputError("work-zone capacity factors must lie in (0, 1.2]");
    if (in.open_lanes < 1) throw InputError("open lane count must be >= 1");
    WorkZoneCapacity out;
    out.per_lane_pcu_h =
        in.c_bs_pcu_h_ln * in.f_n * in.f_lw * in.f_lc * in.f_hv * in.f_se * in.f_wi * in.f_ls;
    out.total_pcu_h = out.per_lane_pcu_h * in.open_lanes;
    return out;
}

FlowModelParams load_flow_params(const std::filesystem::path& path) {
    const auto kv = util::KeyValueFile::load(path);
    FlowModelParams p;
    p.alpha1 = kv.get_double("alpha1");
    p.alpha2 = kv.get_double("alpha2");
    p.alpha3 = kv.get_double("alpha3");
    p.u_s_kmh = kv.get_double("u_s_kmh");
    p.capacity_pcu_h_ln = kv.get_double("capacity_pcu_h_ln");
    validate(p);
    return p;
}

void save_flow_params(const std::filesystem::path& path, const FlowModelParams& p) {
    validate(p);
    std::string body;
    body += "alpha1 = " + util::format_double(p.alpha1) + "\n";
    body += "alpha2 = " + util::format_double(p.alpha2) + "\n";
    body += "alpha3 = " + util::format_double(p.alpha3) + "\n";
    body += "u_s_kmh = " + util::format_double(p.u_s_kmh) + "\n";
    body += "capacity_pcu_h_ln = " + util::format_double(p.capacity_pcu_h_ln) + "\n";
    util::write_text_file(path, body);
}

std::vector<PresetRow> load_presets_csv(const std::filesystem::path& path) {
    const auto rows =
        util::read_csv(path, "design_speed_kmh,capacity_pcu_h_ln,alpha1,alpha2,alpha3");
    std::vector<PresetRow> out;
    for (const auto& row : rows) {
        if (row.size() != 5) throw InputError(path.string() + ": expected 5 columns");
        PresetRow r;
        r.design_speed_kmh = util::parse_double(row[0]);
        r.params.capacity_pcu_h_ln = util::parse_double(row[1]);
        r.params.alpha1 = util::parse_double(row[2]);
        r.params.alpha2 = util::parse_double(row[3]);
        r.params.alpha3 = util::parse_double(row[4]);
        r.params.u_s_kmh = r.design_speed_kmh;
        validate(r.params);
        out.push_back(r);
    }
    return out;
}

} // namespace roadwork::flow
