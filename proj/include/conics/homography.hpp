#pragma once

#include "conics/conic.hpp"
#include "conics/types.hpp"

namespace conics {

// ---------------------------------------------------------------------------
// Change of projective coordinates fixed by four points, no three collinear:
// the reference points e0, e1, e2 and the unit point (1,1,1) map to
// p0, p1, p2, p3. apply() takes frame coordinates back to the original ones.
// ---------------------------------------------------------------------------

class Homography {
public:
    // Solves [p0 p1 p2] lambda = p3 through the adjugate (the common scale
    // cancels) and assembles H = [l0 p0 | l1 p1 | l2 p2]. Throws
    // CollinearFrame naming the offending triple, or SingularSystem when the
    // solve is too ill-conditioned to trust.
    static Homography from_frame(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                                 const Vec3& p3);

    // Any invertible matrix as a coordinate change ( |det| >= 1e-12 ||h||^3 ).
    explicit Homography(const Mat3& h);

    const Mat3& matrix() const { return h_; }
    const Mat3& inverse_matrix() const { return adj_; }  // adjugate: inverse up to scale
    const Vec3& lambda() const { return lambda_; }       // frame scales, up to common factor

    Vec3 apply(const Vec3& xp) const { return h_ * xp; }
    Vec3 apply_inverse(const Vec3& x) const { return adj_ * x; }

private:
    Homography(const Mat3& h, const Vec3& lambda);

    Mat3 h_;
    Mat3 adj_;
    Vec3 lambda_{};
};

// H^T C H, re-symmetrized and scaled to unit Frobenius norm: the conic seen
// in the frame coordinates.
Conic transform_conic(const Homography& h, const Conic& c);

}  // namespace conics
