#include "backstep/io.hpp"

#include "backstep/error.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace backstep {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex z) {
    std::string out = format_real(z.real());
    double im = z.imag();
    if (std::signbit(im) && !std::isnan(im))
        out += "-" + format_real(-im);
    else
        out += "+" + format_real(im);
    return out + "i";
}

Complex parse_complex(const std::string& s) {
    if (s.empty() || s.back() != 'i') throw UsageError("complex literal must end in 'i': " + s);
    // split at the last sign that is not part of an exponent
    size_t split = std::string::npos;
    for (size_t p = s.size() - 1; p > 0; --p) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos) throw UsageError("malformed complex literal: " + s);
    try {
        double re = std::stod(s.substr(0, split));
        double im = std::stod(s.substr(split, s.size() - 1 - split));
        return {re, im};
    } catch (const std::exception&) {
        throw UsageError("malformed complex literal: " + s);
    }
}

void write_matrix_csv(std::ostream& os, const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << format_complex(m(i, j));
        }
        os << '\n';
    }
}

CMatrix read_matrix_csv(std::istream& is) {
    std::vector<std::vector<Complex>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<Complex> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(parse_complex(cell));
        if (!rows.empty() && row.size() != rows.front().size()) throw UsageError("ragged matrix CSV");
        rows.push_back(std::move(row));
    }
    CMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

json model_to_json(const SpectrumModel& model) {
    json j;
    j["kind"] = to_string(model.kind());
    j["alpha"] = model.alpha();
    j["scale"] = model.scale();
    j["n_max"] = model.n_max();
    j["b"] = model.b_values();
    json ev = json::array();
    for (const Complex& z : model.eigenvalues()) ev.push_back({z.real(), z.imag()});
    j["eigenvalues"] = ev;
    return j;
}

SpectrumModel model_from_json(const json& j) {
    try {
        if (!j.is_object()) throw UsageError("model document must be a JSON object");
        Kind kind = kind_from_string(j.at("kind").get<std::string>());
        double alpha = j.at("alpha").get<double>();
        int n_max = j.at("n_max").get<int>();
        std::vector<double> b = j.at("b").get<std::vector<double>>();
        std::vector<Complex> ev;
        for (const json& e : j.at("eigenvalues")) {
            if (e.is_array() && e.size() == 2)
                ev.emplace_back(e[0].get<double>(), e[1].get<double>());
            else if (e.is_number())
                ev.emplace_back(e.get<double>(), 0.0);
            else
                throw UsageError("eigenvalues must be numbers or [re, im] pairs");
        }
        if (static_cast<int>(ev.size()) != n_max || static_cast<int>(b.size()) != n_max)
            throw UsageError("n_max does not match the eigenvalue/b table lengths");
        return SpectrumModel::tabulated(kind, alpha, std::move(ev), std::move(b));
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed model document: ") + e.what());
    }
}

json gap_report_to_json(const GapReport& r) {
    json j;
    j["n_check"] = r.n_check;
    j["ordered"] = r.ordered;
    j["pass"] = r.pass;
    j["b_lo"] = r.b_lo;
    j["b_hi"] = r.b_hi;
    json conds = json::array();
    for (const GapCondition* c : {&r.step_lower, &r.step_upper, &r.cross, &r.power}) {
        json jc;
        jc["name"] = c->name;
        jc["constant"] = c->constant;
        jc["worst_pair"] = {c->worst_i, c->worst_j};
        jc["pass"] = c->pass;
        conds.push_back(jc);
    }
    j["conditions"] = conds;
    return j;
}

namespace {

json scalar_list(const std::vector<Complex>& v, bool real) {
    json a = json::array();
    for (const Complex& z : v) {
        if (real)
            a.push_back(z.real());
        else
            a.push_back({z.real(), z.imag()});
    }
    return a;
}

}  // namespace

json synthesis_to_json(const BacksteppingSynthesis& syn) {
    json j;
    j["lambda"] = syn.lambda;
    j["N"] = syn.N;
    j["dist"] = syn.cert.dist;
    j["k"] = scalar_list(syn.k, syn.model->kind() == Kind::SelfAdjoint);
    j["tb_residual_max"] = syn.tb_residual_max();
    json norms;
    norms["T"] = syn.norm_T ? json(*syn.norm_T) : json(nullptr);
    norms["Tinv"] = syn.norm_Tinv ? json(*syn.norm_Tinv) : json(nullptr);
    j["norms"] = norms;
    return j;
}

json schedule_to_json(const NullControlSchedule& s) {
    json j;
    j["gamma"] = s.gamma;
    j["sigma"] = s.sigma;
    j["horizon"] = s.horizon;
    j["L_sigma"] = s.L_sigma;
    j["dimension"] = s.dimension;
    json stages = json::array();
    for (const NullControlStage& st : s.stages) {
        json js;
        js["N"] = st.N;
        js["lambda"] = st.lambda;
        js["delta"] = st.delta;
        js["t_start"] = st.t_start;
        stages.push_back(js);
    }
    j["stages"] = stages;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_sweep_csv(std::ostream& os, const SpectrumModel& model, const CostSweep& sweep) {
    os << "N,lambda,dist,norm_T,norm_Tinv,k_sup,k_inf,F_inf,fit_exponent\n";
    const double nan = std::nan("");
    for (const CostReport& r : sweep.rows) {
        os << r.N << ',' << format_real(r.lambda) << ',' << format_real(r.dist) << ','
           << format_real(r.flagged ? nan : r.norm_T) << ',' << format_real(r.flagged ? nan : r.norm_Tinv) << ','
           << format_real(r.flagged ? nan : r.k_sup) << ',' << format_real(r.flagged ? nan : r.k_inf) << ','
           << format_real(r.flagged ? nan : r.F_inf) << ',' << format_real(r.fitted_exponent) << '\n';
    }
    if (sweep.fit) {
        os << "# fit log(norm_T+norm_Tinv) = a + b*lambda^(1/alpha), alpha=" << format_real(model.alpha())
           << ": b=" << format_real(sweep.fit->slope) << " a=" << format_real(sweep.fit->intercept)
           << " r2=" << format_real(sweep.fit->r2) << " points=" << sweep.fit->points << '\n';
    } else {
        os << "# fit: not enough points\n";
    }
    for (const CostReport& r : sweep.rows) {
        if (r.flagged) {
            os << "# flagged N=" << r.N << " lambda=" << format_real(r.lambda) << ": " << r.flag_reason << '\n';
            continue;
        }
        for (const WeightedNorm& w : r.weighted)
            os << "# weighted N=" << r.N << " s=" << format_real(w.s) << " norm_T=" << format_real(w.norm_T)
               << " norm_Tinv=" << format_real(w.norm_Tinv) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const NullControlReport& rep) {
    os << "t,norm_H,norm_s,u\n";
    for (const TrajectorySample& s : rep.trajectory)
        os << format_real(s.t) << ',' << format_real(s.norm_H) << ',' << format_real(s.norm_s) << ','
           << format_real(s.u) << '\n';
    for (const StageRecord& st : rep.stages)
        os << "# stage N=" << st.N << " lambda=" << format_real(st.lambda) << " delta=" << format_real(st.delta)
           << " norm_end=" << format_real(st.norm_H_end) << " max_u=" << format_real(st.max_u)
           << " log_growth=" << format_real(st.log_growth)
           << " certified_log_factor=" << format_real(st.certified_log_factor)
           << " contraction_exponent=" << format_real(st.contraction_exponent) << '\n';
    os << "# cost fit log(|T||Tinv|) = " << format_real(rep.cost_log_offset) << " + "
       << format_real(rep.cost_rate) << "*lambda^(1/alpha)\n";
    os << "# final_ratio=" << format_real(rep.final_ratio) << " target=" << format_real(rep.epsilon)
       << " reached=" << (rep.reached ? "true" : "false") << '\n';
}

StateVector state_from_json(const json& j) {
    if (!j.is_array()) throw UsageError("state must be a JSON array");
    StateVector y;
    try {
        for (const json& e : j) {
            if (e.is_number())
                y.coeffs.emplace_back(e.get<double>(), 0.0);
            else if (e.is_array() && e.size() == 2)
                y.coeffs.emplace_back(e[0].get<double>(), e[1].get<double>());
            else
                throw UsageError("state entries must be numbers or [re, im] pairs");
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed state: ") + e.what());
    }
    return y;
}

}  // namespace backstep
