#pragma once

namespace galois_embed {

// Numerical equality contracts used throughout. Points are compared after
// reduction with a toroidal coordinate metric, projective points with the
// chordal (Fubini-Study) distance.
struct Tolerances {
    double point = 1e-9;
    double proj = 1e-7;
    double num = 1e-10;
};

} // namespace galois_embed
