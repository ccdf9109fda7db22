#include "soav/csv.hpp"

#include <cstdio>

namespace soav::io {

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

namespace {

void write_header(std::ostream& out, Index n) {
    out << "t,u";
    for (Index i = 1; i <= n; ++i) {
        out << ",x" << i;
    }
    out << ",V\n";
}

void write_row(std::ostream& out, double t, double u, const Vector& x, double v) {
    out << format_number(t) << ',' << format_number(u);
    for (Index i = 0; i < x.size(); ++i) {
        out << ',' << format_number(x(i));
    }
    out << ',' << format_number(v) << '\n';
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const Index n = trajectory.x.rows();
    const Index rows = trajectory.samples_filled;
    write_header(out, n);
    for (Index l = 0; l <= rows; ++l) {
        const Index u_index = (l < rows || rows == 0) ? l : rows - 1;
        const double u = trajectory.u.size() > 0 ? trajectory.u(std::min(u_index,
                                                   trajectory.u.size() - 1))
                                                 : 0.0;
        write_row(out, trajectory.time[static_cast<std::size_t>(l)], u, trajectory.x.col(l),
                  trajectory.value(l));
    }
    if (trajectory.aborted) {
        out << "# aborted at t=" << format_number(trajectory.aborted_at) << '\n';
    }
}

void write_open_loop_csv(std::ostream& out, const DiscreteProblem& problem, const Vector& xi,
                         const Vector& u, double objective) {
    const Matrix x = simulate(problem, xi, u);
    write_header(out, problem.n());
    for (Index l = 0; l <= u.size(); ++l) {
        const Index u_index = l < u.size() ? l : u.size() - 1;
        write_row(out, static_cast<double>(l) * problem.h, u(u_index), x.col(l), objective);
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<analysis::ValueSample>& samples) {
    if (samples.empty()) {
        return;
    }
    const Index n = samples.front().xi.size();
    for (Index i = 1; i <= n; ++i) {
        out << 'x' << i << ',';
    }
    out << "V,feasible\n";
    for (const auto& sample : samples) {
        for (Index i = 0; i < n; ++i) {
            out << format_number(sample.xi(i)) << ',';
        }
        if (sample.value) {
            out << format_number(*sample.value) << ",1\n";
        } else {
            out << "nan,0\n";
        }
    }
}

}  // namespace soav::io
