#include <array>

#include "bbmwave/fem.hpp"

namespace bbmwave {

namespace {

constexpr std::array<QuadraturePoint, 6> kDegree4 = {{
    {{0.108103018168070, 0.445948490915965, 0.445948490915965}, 0.223381589678011},
    {{0.445948490915965, 0.108103018168070, 0.445948490915965}, 0.223381589678011},
    {{0.445948490915965, 0.445948490915965, 0.108103018168070}, 0.223381589678011},
    {{0.816847572980459, 0.091576213509771, 0.091576213509771}, 0.109951743655322},
    {{0.091576213509771, 0.816847572980459, 0.091576213509771}, 0.109951743655322},
    {{0.091576213509771, 0.091576213509771, 0.816847572980459}, 0.109951743655322},
}};

constexpr double a1 = 0.501426509658179, b1 = 0.249286745170910;
constexpr double a2 = 0.873821971016996, b2 = 0.063089014491502;
constexpr double c1 = 0.053145049844817, c2 = 0.310352451033784, c3 = 0.636502499121399;
constexpr double w1 = 0.116786275726379, w2 = 0.050844906370207, w3 = 0.082851075618374;

constexpr std::array<QuadraturePoint, 12> kDegree6 = {{
    {{a1, b1, b1}, w1},
    {{b1, a1, b1}, w1},
    {{b1, b1, a1}, w1},
    {{a2, b2, b2}, w2},
    {{b2, a2, b2}, w2},
    {{b2, b2, a2}, w2},
    {{c1, c2, c3}, w3},
    {{c1, c3, c2}, w3},
    {{c2, c1, c3}, w3},
    {{c2, c3, c1}, w3},
    {{c3, c1, c2}, w3},
    {{c3, c2, c1}, w3},
}};

}  // namespace

std::span<const QuadraturePoint> dunavant_degree4() { return kDegree4; }
std::span<const QuadraturePoint> dunavant_degree6() { return kDegree6; }

}  // namespace bbmwave
