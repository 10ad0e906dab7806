#pragma once

#include "hodgelab/exactlin/cohomology.hpp"
#include "hodgelab/exactlin/fp_rank.hpp"
#include "hodgelab/gralg/coeff_ring.hpp"

namespace hodgelab {

// ker(d_out) / im(d_in) for integer matrices read in the given coefficient ring.
inline AbGroup cohomology_over(const IntMat& d_in, const IntMat& d_out, const CoeffRing& ring) {
    switch (ring.kind) {
        case CoeffRing::Kind::Z: return cohomology_of_pair(d_in, d_out);
        case CoeffRing::Kind::Fp: return cohomology_of_pair_fp(d_in, d_out, ring.p);
        case CoeffRing::Kind::ZmodP2: return cohomology_of_pair_mod(d_in, d_out, ring.modulus());
        case CoeffRing::Kind::Q: {
            check_composable(d_in, d_out);
            std::size_t r_in = rational_rank(d_in);
            std::size_t r_out = rational_rank(d_out, d_in.rows() - r_in);
            return AbGroup(d_in.rows() - r_in - r_out);
        }
    }
    return AbGroup();
}

}  // namespace hodgelab
