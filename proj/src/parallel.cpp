#include "spherevar/parallel.hpp"

#include <cstdlib>
#include <string>

namespace spherevar {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPHERE_LAB_WORKERS")) {
        try {
            const int parsed = std::stoi(env);
            if (parsed > 0) return parsed;
        } catch (...) {
            // Malformed values fall through to hardware concurrency.
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace spherevar
