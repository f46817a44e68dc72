#include "bubblefield/levelset.hpp"

#include <cmath>
#include <vector>

namespace bubblefield::levelset {

std::vector<Component> label_components(const LevelSetField& f, std::vector<int>* labels_out) {
    const Grid2D& g = f.grid;
    std::vector<int> labels(g.size(), -1);
    std::vector<Component> comps;
    std::vector<std::size_t> stack;

    for (int j0 = 0; j0 < g.ny; ++j0) {
        for (int i0 = 0; i0 < g.nx; ++i0) {
            const std::size_t seed = g.index(i0, j0);
            if (labels[seed] != -1 || !(f.u[seed] < 0.0)) continue;
            const int id = static_cast<int>(comps.size());
            Component c;
            double sx = 0.0, sy = 0.0;
            labels[seed] = id;
            stack.push_back(seed);
            while (!stack.empty()) {
                const std::size_t k = stack.back();
                stack.pop_back();
                const int i = static_cast<int>(k % static_cast<std::size_t>(g.nx));
                const int j = static_cast<int>(k / static_cast<std::size_t>(g.nx));
                ++c.cells;
                c.mass += std::abs(f.u[k]);
                sx += g.x(i);
                sy += g.y(j);
                if (i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) c.touches_boundary = true;
                const int ni[4] = {i - 1, i + 1, i, i};
                const int nj[4] = {j, j, j - 1, j + 1};
                for (int n = 0; n < 4; ++n) {
                    if (ni[n] < 0 || nj[n] < 0 || ni[n] >= g.nx || nj[n] >= g.ny) continue;
                    const std::size_t m = g.index(ni[n], nj[n]);
                    if (labels[m] == -1 && f.u[m] < 0.0) {
                        labels[m] = id;
                        stack.push_back(m);
                    }
                }
            }
            c.area = static_cast<double>(c.cells) * g.dx * g.dy;
            c.mass *= g.dx * g.dy;
            c.centroid = {sx / static_cast<double>(c.cells), sy / static_cast<double>(c.cells)};
            comps.push_back(c);
        }
    }
    if (labels_out != nullptr) *labels_out = std::move(labels);
    return comps;
}

}  // namespace bubblefield::levelset
