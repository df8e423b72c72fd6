#include "qwkb/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qwkb {

using nlohmann::json;

void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " -> " + path);
}

namespace {

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

} // namespace

std::string grid_to_csv(const EigenGrid& grid) {
    std::ostringstream os;
    os.precision(17);
    os << "t,m,re,im,abs,log_re,log_im\n";
    for (std::size_t i = 0; i < grid.ts().size(); ++i)
        for (int m = 0; m < grid.degree(); ++m) {
            Complex v = grid.values()[m][i], l = grid.logs()[m][i];
            os << grid.ts()[i] << "," << m + 1 << "," << v.real() << "," << v.imag() << ","
               << std::abs(v) << "," << l.real() << "," << l.imag() << "\n";
        }
    return os.str();
}

json grid_to_json(const EigenGrid& grid) {
    json j;
    j["parametrization"] = grid.poly().param().describe();
    j["degree"] = grid.degree();
    j["t"] = grid.ts();
    json vals = json::array(), logs = json::array();
    for (int m = 0; m < grid.degree(); ++m) {
        json row = json::array(), lrow = json::array();
        for (std::size_t i = 0; i < grid.ts().size(); ++i) {
            row.push_back(complex_pair(grid.values()[m][i]));
            lrow.push_back(complex_pair(grid.logs()[m][i]));
        }
        vals.push_back(std::move(row));
        logs.push_back(std::move(lrow));
    }
    j["values"] = std::move(vals);
    j["logs"] = std::move(logs);
    j["min_separation"] = grid.min_separation();
    j["min_magnitude"] = grid.min_magnitude();
    j["events"] = events_to_json(grid.events());
    return j;
}

json events_to_json(const std::vector<SpectralEvent>& events) {
    json out = json::array();
    for (const auto& e : events) {
        json je;
        je["kind"] = to_string(e.kind);
        je["t"] = e.t;
        je["measure"] = e.measure;
        if (e.branch_a >= 0) je["branch_a"] = e.branch_a + 1;
        if (e.branch_b >= 0) je["branch_b"] = e.branch_b + 1;
        out.push_back(std::move(je));
    }
    return out;
}

json partition_to_json(const ArcPartition& part) {
    json j;
    j["breakpoints"] = part.breakpoints;
    json arcs = json::array();
    for (const auto& a : part.arcs) {
        json ja;
        ja["t_lo"] = a.t_lo;
        ja["t_hi"] = a.t_hi;
        json order = json::array();
        for (int m : a.order) order.push_back(m + 1);
        ja["order"] = std::move(order);
        ja["resonance"] = a.resonance;
        if (!a.tied.empty()) {
            json tied = json::array();
            for (int m : a.tied) tied.push_back(m + 1);
            ja["tied"] = std::move(tied);
        }
        if (!a.singular_ts.empty()) ja["singular_ts"] = a.singular_ts;
        arcs.push_back(std::move(ja));
    }
    j["arcs"] = std::move(arcs);
    return j;
}

json regularity_to_json(const RegularityReport& rep) {
    json j;
    j["regular"] = rep.regular;
    j["min_separation"] = rep.min_separation;
    j["min_separation_t"] = rep.min_separation_t;
    j["min_magnitude"] = rep.min_magnitude;
    j["min_magnitude_t"] = rep.min_magnitude_t;
    j["min_trailing_coeff"] = rep.min_trailing;
    j["min_leading_coeff"] = rep.min_leading;
    j["events"] = events_to_json(rep.events);
    j["summary"] = rep.summary();
    return j;
}

std::string trace_to_csv(const RecursionTrace& trace) {
    std::ostringstream os;
    os.precision(17);
    os << "k,log_abs,phase\n";
    for (long k = trace.k_first; k <= trace.k_last(); ++k)
        os << k << "," << trace.at(k).log_abs() << "," << trace.at(k).phase() << "\n";
    return os.str();
}

std::string growth_table_to_csv(const GrowthTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "n_or_eps,rate,extrapolated,err_est\n";
    for (const auto& r : table.rows)
        os << r.n_or_eps << "," << r.rate << "," << r.extrapolated << "," << r.err_est << "\n";
    return os.str();
}

std::string profile_to_csv(const EntropyProfile& prof) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha,sigma\n";
    for (std::size_t i = 0; i < prof.alphas.size(); ++i)
        os << prof.alphas[i] << "," << prof.sigma[i] << "\n";
    return os.str();
}

std::string chi_to_csv(const EntropyProfile& prof) {
    std::ostringstream os;
    os.precision(17);
    os << "t,chi\n";
    for (std::size_t i = 0; i < prof.chi_ts.size(); ++i)
        os << prof.chi_ts[i] << "," << prof.chi_vals[i] << "\n";
    return os.str();
}

std::string jet_to_csv(const FormalJet& jet) {
    std::ostringstream os;
    os.precision(17);
    os << "x,s,re,im\n";
    for (int s = 0; s <= jet.max_order(); ++s)
        for (std::size_t i = 0; i < jet.xs.size(); ++i)
            os << jet.xs[i] << "," << s << "," << jet.phi[s][i].real() << ","
               << jet.phi[s][i].imag() << "\n";
    return os.str();
}

json deflated_to_json(const DeflatedEquation& defl) {
    json j;
    j["degree"] = defl.d;
    j["eps"] = defl.eps;
    j["k_first"] = defl.k_first;
    j["zz_residual"] = defl.zz_residual;
    j["provenance"] = defl.provenance;
    json cs = json::array();
    for (const auto& row : defl.c) {
        json jr = json::array();
        for (Complex z : row) jr.push_back(complex_pair(z));
        cs.push_back(std::move(jr));
    }
    j["coefficients"] = std::move(cs);
    return j;
}

} // namespace qwkb
