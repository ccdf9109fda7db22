#include "soav/solve_result.hpp"

namespace soav {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged:
            return "converged";
        case SolveStatus::max_iter:
            return "max_iter";
        case SolveStatus::infeasible_suspected:
            return "infeasible_suspected";
        case SolveStatus::infeasible:
            return "infeasible";
    }
    return "unknown";
}

}  // namespace soav
