#pragma once

namespace kempe {

// Smallest s (and t) for which the clique-removal property is asserted at a
// given surplus ell: 2 at ell=0, 4 at ell=1, ceil(3.5*ell + 2) beyond.
inline int admissibility_floor(int ell) {
    if (ell <= 0) return 2;
    if (ell == 1) return 4;
    return (7 * ell + 5) / 2;  // ceil((7*ell + 4) / 2)
}

inline bool admissible_pair(int s, int t, int ell) {
    int f = admissibility_floor(ell);
    return s >= f && t >= f;
}

}  // namespace kempe
