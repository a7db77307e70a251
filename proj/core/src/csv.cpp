#include "nmrelax/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nmrelax::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

[[noreturn]] void fail(int lineno, const std::string& what) {
    throw std::invalid_argument("csv line " + std::to_string(lineno) + ": " + what);
}

double field_to_double(const std::string& field, int lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        while (pos < field.size() &&
               (field[pos] == ' ' || field[pos] == '\t' || field[pos] == '\r')) {
            ++pos;
        }
        if (pos != field.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(lineno, "bad numeric field '" + field + "'");
    }
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in) {
    std::vector<double> times;
    std::vector<Complex> values;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            const auto fields = split_fields(line);
            if (fields.empty() || fields[0] != "t_s") {
                fail(lineno, "expected header starting with 't_s'");
            }
            if (fields.size() < 2 || fields.size() > 3) {
                fail(lineno, "expected 2 or 3 columns");
            }
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() < 2 || fields.size() > 3) {
            fail(lineno, "expected 2 or 3 fields");
        }
        const double t = field_to_double(fields[0], lineno);
        const double re = field_to_double(fields[1], lineno);
        const double im = fields.size() == 3 ? field_to_double(fields[2], lineno) : 0.0;
        if (!times.empty() && !(t > times.back())) {
            fail(lineno, "times must be strictly increasing");
        }
        times.push_back(t);
        values.push_back({re, im});
    }
    if (times.empty()) {
        throw std::invalid_argument("csv: no data rows");
    }
    return Trajectory(std::move(times), std::move(values), "ingested");
}

Trajectory read_trajectory_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv file: " + path);
    return read_trajectory_csv(in);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::pair<std::string, std::string>>& metadata,
                          const std::string& re_name, const std::string& im_name) {
    std::ostringstream ss;
    ss.precision(17);
    for (const auto& [key, value] : metadata) {
        ss << "# " << key << " = " << value << "\n";
    }
    ss << "t_s," << re_name << ',' << im_name << "\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        ss << traj.times[i] << ',' << traj.values[i].real() << ','
           << traj.values[i].imag() << "\n";
    }
    out << ss.str();
}

}  // namespace nmrelax::io
