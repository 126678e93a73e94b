use serde::Serialize;

/// Human-readable description of a registry entry and how its
/// z-derivatives were reduced to `delta = q d/dq`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IdentityMeta {
    pub id: &'static str,
    pub description: &'static str,
    pub lambda_conversion: &'static str,
    pub supplementary: bool,
}

const NONE: &str = "none (no z-derivatives)";
const FIRST: &str = "d/dz = 2 lambda delta; one derivative per term, lambda cancels";

macro_rules! meta {
    ($id:literal, $d:literal, $c:expr) => {
        meta!($id, $d, $c, false)
    };
    ($id:literal, $d:literal, $c:expr, $s:expr) => {
        IdentityMeta {
            id: $id,
            description: $d,
            lambda_conversion: $c,
            supplementary: $s,
        }
    };
}

static TABLE: &[IdentityMeta] = &[
    meta!("R1", "Ramanujan system: delta P", FIRST),
    meta!("R2", "Ramanujan system: delta Q", FIRST),
    meta!("R3", "Ramanujan system: delta R", FIRST),
    meta!("M1", "Ramamani system: delta Pcal", FIRST),
    meta!("M2", "Ramamani system: delta Ptilde", FIRST),
    meta!("M3", "Ramamani system: delta Qcal", FIRST),
    meta!("L1", "E2 as a combination of the level-2 weight-2 series", NONE),
    meta!("L2", "Et2 = 2 E2(2z) - E2(z)", NONE),
    meta!("L3", "Ecal2 = 4/3 E2(2z) - 1/3 E2(z)", NONE),
    meta!("D1", "differential equation for Ecal2", FIRST),
    meta!("D2", "differential equation for Et2", FIRST),
    meta!("D3", "differential equation for Ecal4", FIRST),
    meta!("D4", "differential equation for Dcal", FIRST),
    meta!("A1", "Dcal^3 = Delta(2z)^2/Delta(z)", NONE),
    meta!("C1", "Chazy equation for y = pi i E2", "y = lambda E2, ' = 2 lambda delta; lambda^4 common to every term (delta form), also checked graded"),
    meta!("Y1", "third-order equation for y = pi i Ecal2, cleared of its denominator", "y = lambda Ecal2; lambda^6 common to every term (delta form), also checked graded"),
    meta!("K1", "Rankin's degree-4 equation for Delta", "each ' becomes 2 lambda delta; (2 lambda)^4 common to every term"),
    meta!("K2", "degree-6 equation for Dcal (re-derived coefficients)", "each ' becomes 2 lambda delta; (2 lambda)^6 common to every term"),
    meta!("S1", "Et2 in terms of s", FIRST),
    meta!("S2", "Dcal in terms of s", FIRST),
    meta!("S3", "Ecal4 in terms of s", FIRST),
    meta!("S4", "Ecal2 in terms of s", FIRST),
    meta!("S5", "Schwarzian equation for s, parameters (1/2, 0, 0), cleared", "Schwarzian is invariant under z -> 2 lambda z up to (2 lambda)^2, common to every term"),
    meta!("G1", "generalized Halphen system, parameters (1/2, 0, 0)", "graded: u has lambda-degree 1, dz raises it by one"),
    meta!("G2", "pi i Et2 = u1 - u3", "graded"),
    meta!("G3", "pi i Ecal2 = -(u2 + u3)", "graded"),
    meta!("G4", "pi^2 Ecal4 = (u1 - u3)(u3 - u2), with pi^2 = -lambda^2", "graded"),
    meta!("G5", "s as a cross-ratio of u1, u2, u3", "graded; degrees cancel"),
    meta!("H1", "classical Halphen system, first equation", "graded"),
    meta!("H2", "classical Halphen system, second equation", "graded"),
    meta!("H3", "classical Halphen system, third equation", "graded"),
    meta!("H4", "Chazy equation for v1 + v2 + v3", "graded"),
    meta!("T1", "Jacobi quartic identity", NONE),
    meta!("T2", "theta2'/theta2 - theta3'/theta3 = (pi i/4) theta4^4", "' = 2 lambda delta; lambda cancels, 1/4 becomes 1/8"),
    meta!("T3", "theta3'/theta3 - theta4'/theta4 = (pi i/4) theta2^4", "' = 2 lambda delta; lambda cancels, 1/4 becomes 1/8"),
    meta!("T4", "theta2'/theta2 - theta4'/theta4 = (pi i/4) theta3^4", "' = 2 lambda delta; lambda cancels, 1/4 becomes 1/8"),
    meta!("T5", "eta^3 = theta2 theta3 theta4/2 and eta^24 = Delta", NONE),
    meta!("T6", "eta(2z)^2/eta(z) = theta2/2", NONE),
    meta!("T7", "Delta: product form equals Eisenstein form", NONE),
    meta!("B1", "three constructions of s agree", NONE),
    meta!("B2", "s = (2/lambda_modular - 1)^2", NONE),
    meta!("B3", "Et2 from logarithmic derivatives of Dcal and Delta", "2 pi i Et2 = ...; every term has one ' = 2 lambda delta"),
    meta!("X1", "E4^2 = E8", NONE, true),
    meta!("J1", "j and j2 from their defining quotients", NONE, true),
    meta!("G6", "theta closed forms of u1, u2, u3", "-1/2 (log f)' = -lambda dlog f", true),
];

/// Metadata for a registry id.
pub fn metadata(id: &str) -> Option<&'static IdentityMeta> {
    TABLE.iter().find(|m| m.id == id)
}
