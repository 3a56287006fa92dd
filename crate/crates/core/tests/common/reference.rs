//! Published reference tables: alpha, ||p_h||_{L^q}, eta, J on the 32 x 32 mesh.

use optcert_core::experiments::{Case, Desired, Example};

pub struct Table {
    pub example: Example,
    pub case: Case,
    pub desired: Option<Desired>,
    /// `[alpha, pnorm, eta, J]`, ascending in alpha.
    pub rows: [[f64; 4]; 10],
}

pub const TABLES: [Table; 13] = [
    Table {
        example: Example::Cubic,
        case: Case::Unconstrained,
        desired: Some(Desired::A1),
        rows: [
            [1.0e-06, 9.990654861172e-05, 6.776197632762e-03, 3.344560044987e-03],
            [1.0e-05, 9.328604940252e-04, 1.606889689070e-02, 3.128947575776e-02],
            [1.0e-04, 5.916313713912e-03, 3.810535956559e-02, 1.967337721757e-01],
            [1.0e-03, 1.322797500856e-02, 9.036204771862e-02, 4.320833160546e-01],
            [1.0e-02, 1.509224717529e-02, 2.142821839497e-01, 4.922544738762e-01],
            [1.0e-01, 1.530600543072e-02, 5.081431366100e-01, 4.992144829702e-01],
            [1.0e+00, 1.532768796263e-02, 1.204997272869e+00, 4.999213370332e-01],
            [1.0e+01, 1.532985932323e-02, 2.857498848277e+00, 4.999921325890e-01],
            [1.0e+02, 1.533007649041e-02, 6.776197632762e+00, 4.999992132478e-01],
            [1.0e+03, 1.533009820744e-02, 1.606889689070e+01, 4.999999213247e-01],
        ],
    },
    Table {
        example: Example::Cubic,
        case: Case::Unconstrained,
        desired: Some(Desired::A2),
        rows: [
            [1.0e-06, 7.823778739727e-03, 6.776197632762e-03, 7.227759688190e+01],
            [1.0e-05, 2.234541300612e-02, 1.606889689070e-02, 1.065710637346e+02],
            [1.0e-04, 5.805844706415e-02, 3.810535956559e-02, 1.386316936362e+02],
            [1.0e-03, 1.125576598202e-01, 9.036204771862e-02, 1.568821491955e+02],
            [1.0e-02, 2.290137136719e-01, 2.142821839497e-01, 1.625724420922e+02],
            [1.0e-01, 2.997603240217e-01, 5.081431366100e-01, 1.642031427088e+02],
            [1.0e+00, 3.061090377257e-01, 1.204997272869e+00, 1.644198126030e+02],
            [1.0e+01, 3.066635772733e-01, 2.857498848277e+00, 1.644419766418e+02],
            [1.0e+02, 3.067181181971e-01, 6.776197632762e+00, 1.644441976184e+02],
            [1.0e+03, 3.067235630566e-01, 1.606889689070e+01, 1.644444197614e+02],
        ],
    },
    Table {
        example: Example::Cubic,
        case: Case::ControlConstrained,
        desired: Some(Desired::A1),
        rows: [
            [1.0e-06, 1.455724773650e-02, 6.776197632762e-03, 4.507886038196e-01],
            [1.0e-05, 1.455724403855e-02, 1.606889689070e-02, 4.508916148391e-01],
            [1.0e-04, 1.455717724977e-02, 3.810535956559e-02, 4.519082323790e-01],
            [1.0e-03, 1.457338622672e-02, 9.036204771862e-02, 4.612690393001e-01],
            [1.0e-02, 1.509224717529e-02, 2.142821839497e-01, 4.922544738762e-01],
            [1.0e-01, 1.530600543072e-02, 5.081431366100e-01, 4.992144829702e-01],
            [1.0e+00, 1.532768796263e-02, 1.204997272869e+00, 4.999213370332e-01],
            [1.0e+01, 1.532985932323e-02, 2.857498848277e+00, 4.999921325890e-01],
            [1.0e+02, 1.533007649041e-02, 6.776197632762e+00, 4.999992132478e-01],
            [1.0e+03, 1.533009820744e-02, 1.606889689070e+01, 4.999999213247e-01],
        ],
    },
    Table {
        example: Example::Cubic,
        case: Case::ControlConstrained,
        desired: Some(Desired::A2),
        rows: [
            [1.0e-06, 2.954513493743e-01, 6.776197632762e-03, 1.636849171437e+02],
            [1.0e-05, 2.954513728927e-01, 1.606889689070e-02, 1.636850204333e+02],
            [1.0e-04, 2.954526968135e-01, 3.810535956559e-02, 1.636860509190e+02],
            [1.0e-03, 2.954464960067e-01, 9.036204771862e-02, 1.636961799251e+02],
            [1.0e-02, 2.955530339094e-01, 2.142821839497e-01, 1.637871978058e+02],
            [1.0e-01, 2.998739300063e-01, 5.081431366100e-01, 1.642034478360e+02],
            [1.0e+00, 3.061090377257e-01, 1.204997272869e+00, 1.644198126030e+02],
            [1.0e+01, 3.066635772733e-01, 2.857498848277e+00, 1.644419766418e+02],
            [1.0e+02, 3.067181181971e-01, 6.776197632762e+00, 1.644441976184e+02],
            [1.0e+03, 3.067235630566e-01, 1.606889689070e+01, 1.644444197614e+02],
        ],
    },
    Table {
        example: Example::Cubic,
        case: Case::StateConstrained,
        desired: Some(Desired::A1),
        rows: [
            [1.0e-06, 1.166321621310e-04, 6.776197632762e-03, 6.248613075636e-02],
            [1.0e-05, 8.045399583166e-04, 1.606889689070e-02, 8.942494600427e-02],
            [1.0e-04, 5.009426247692e-03, 3.810535956559e-02, 2.037409649052e-01],
            [1.0e-03, 1.322797500856e-02, 9.036204771862e-02, 4.320833160546e-01],
            [1.0e-02, 1.509224717529e-02, 2.142821839497e-01, 4.922544738762e-01],
            [1.0e-01, 1.530600543072e-02, 5.081431366100e-01, 4.992144829702e-01],
            [1.0e+00, 1.532768796263e-02, 1.204997272869e+00, 4.999213370332e-01],
            [1.0e+01, 1.532985932323e-02, 2.857498848277e+00, 4.999921325890e-01],
            [1.0e+02, 1.533007649041e-02, 6.776197632762e+00, 4.999992132478e-01],
            [1.0e+03, 1.533009820744e-02, 1.606889689070e+01, 4.999999213247e-01],
        ],
    },
    Table {
        example: Example::Cubic,
        case: Case::StateConstrained,
        desired: Some(Desired::A2),
        rows: [
            [1.0e-06, 8.727496956489e-04, 6.776197632762e-03, 1.525635329141e+02],
            [1.0e-05, 6.303449080470e-03, 1.606889689070e-02, 1.536018906075e+02],
            [1.0e-04, 2.143214405409e-02, 3.810535956559e-02, 1.559131574621e+02],
            [1.0e-03, 8.541044896637e-02, 9.036204771862e-02, 1.600259053817e+02],
            [1.0e-02, 1.596641521237e-01, 2.142821839497e-01, 1.627648901943e+02],
            [1.0e-01, 2.997603240217e-01, 5.081431366100e-01, 1.642031427088e+02],
            [1.0e+00, 3.061090377257e-01, 1.204997272869e+00, 1.644198126030e+02],
            [1.0e+01, 3.066635772733e-01, 2.857498848277e+00, 1.644419766418e+02],
            [1.0e+02, 3.067181181971e-01, 6.776197632762e+00, 1.644441976184e+02],
            [1.0e+03, 3.067235630566e-01, 1.606889689070e+01, 1.644444197614e+02],
        ],
    },
    Table {
        example: Example::Cubic,
        case: Case::Neitzel,
        desired: None,
        rows: [
            [1.0e-06, 1.961933031441e-04, 6.776197632762e-03, 2.143984056211e-01],
            [1.0e-05, 7.663887131231e-04, 1.606889689070e-02, 2.410556714493e-01],
            [1.0e-04, 2.844056064106e-03, 3.810535956559e-02, 2.890783107664e-01],
            [1.0e-03, 1.055630139945e-02, 9.036204771862e-02, 3.690000948128e-01],
            [1.0e-02, 2.397197977885e-02, 2.142821839497e-01, 4.449373232494e-01],
            [1.0e-01, 4.706175447556e-02, 5.081431366100e-01, 4.917394785652e-01],
            [1.0e+00, 4.818113594926e-02, 1.204997272869e+00, 4.991551130306e-01],
            [1.0e+01, 4.829535470702e-02, 2.857498848277e+00, 4.999153188201e-01],
            [1.0e+02, 4.830679945384e-02, 6.776197632762e+00, 4.999915299530e-01],
            [1.0e+03, 4.830794415727e-02, 1.606889689070e+01, 4.999991529760e-01],
        ],
    },
    Table {
        example: Example::Quintic,
        case: Case::Unconstrained,
        desired: Some(Desired::A1),
        rows: [
            [1.0e-06, 1.179795342411e-04, 8.697974773247e-04, 3.663839269975e-03],
            [1.0e-05, 1.040717291260e-03, 2.498914960443e-03, 3.314332555914e-02],
            [1.0e-04, 6.486412414763e-03, 7.179344781194e-03, 1.967178952607e-01],
            [1.0e-03, 1.467650352720e-02, 2.062614866979e-02, 4.320253853445e-01],
            [1.0e-02, 1.672495487678e-02, 5.925861229879e-02, 4.922543706340e-01],
            [1.0e-01, 1.696149575588e-02, 1.702490943800e-01, 4.992144828609e-01],
            [1.0e+00, 1.698552077353e-02, 4.891230660460e-01, 4.999213370331e-01],
            [1.0e+01, 1.698792705311e-02, 1.405243150394e+00, 4.999921325890e-01],
            [1.0e+02, 1.698816771892e-02, 4.037242258255e+00, 4.999992132478e-01],
            [1.0e+03, 1.698819178587e-02, 1.159893577654e+01, 4.999999213247e-01],
        ],
    },
    Table {
        example: Example::Quintic,
        case: Case::Unconstrained,
        desired: Some(Desired::A2),
        rows: [
            [1.0e-06, 5.510426875132e-03, 8.697974773247e-04, 1.185192313978e+02],
            [1.0e-05, 1.587525748968e-02, 2.498914960443e-03, 1.331807740335e+02],
            [1.0e-04, 4.474831409415e-02, 7.179344781194e-03, 1.473322027953e+02],
            [1.0e-03, 1.039480114464e-01, 2.062614866979e-02, 1.584387338104e+02],
            [1.0e-02, 2.428391864045e-01, 5.925861229879e-02, 1.626178840362e+02],
            [1.0e-01, 3.493646725426e-01, 1.702490943800e-01, 1.642025836782e+02],
            [1.0e+00, 3.554038724369e-01, 4.891230660460e-01, 1.644198119684e+02],
            [1.0e+01, 3.560155910725e-01, 1.405243150394e+00, 1.644419766411e+02],
            [1.0e+02, 3.560769159456e-01, 4.037242258255e+00, 1.644441976184e+02],
            [1.0e+03, 3.560830499750e-01, 1.159893577654e+01, 1.644444197614e+02],
        ],
    },
    Table {
        example: Example::Quintic,
        case: Case::ControlConstrained,
        desired: Some(Desired::A1),
        rows: [
            [1.0e-06, 1.613825290585e-02, 8.697974773247e-04, 4.507855415302e-01],
            [1.0e-05, 1.613824266503e-02, 2.498914960443e-03, 4.508885528139e-01],
            [1.0e-04, 1.613816501602e-02, 7.179344781194e-03, 4.519051721159e-01],
            [1.0e-03, 1.615565078678e-02, 2.062614866979e-02, 4.612661359991e-01],
            [1.0e-02, 1.672495487678e-02, 5.925861229879e-02, 4.922543706340e-01],
            [1.0e-01, 1.696149575588e-02, 1.702490943800e-01, 4.992144828609e-01],
            [1.0e+00, 1.698552077353e-02, 4.891230660460e-01, 4.999213370331e-01],
            [1.0e+01, 1.698792705311e-02, 1.405243150394e+00, 4.999921325890e-01],
            [1.0e+02, 1.698816771892e-02, 4.037242258255e+00, 4.999992132478e-01],
            [1.0e+03, 1.698819178587e-02, 1.159893577654e+01, 4.999999213247e-01],
        ],
    },
    Table {
        example: Example::Quintic,
        case: Case::ControlConstrained,
        desired: Some(Desired::A2),
        rows: [
            [1.0e-06, 3.456649663660e-01, 8.697974773247e-04, 1.636832040856e+02],
            [1.0e-05, 3.456649990198e-01, 2.498914960443e-03, 1.636833073745e+02],
            [1.0e-04, 3.456663172695e-01, 7.179344781194e-03, 1.636843379602e+02],
            [1.0e-03, 3.456602557101e-01, 2.062614866979e-02, 1.636944643396e+02],
            [1.0e-02, 3.457537810584e-01, 5.925861229879e-02, 1.637855203878e+02],
            [1.0e-01, 3.494672249476e-01, 1.702490943800e-01, 1.642029145907e+02],
            [1.0e+00, 3.554038724369e-01, 4.891230660460e-01, 1.644198119684e+02],
            [1.0e+01, 3.560155910725e-01, 1.405243150394e+00, 1.644419766411e+02],
            [1.0e+02, 3.560769159456e-01, 4.037242258255e+00, 1.644441976184e+02],
            [1.0e+03, 3.560830499750e-01, 1.159893577654e+01, 1.644444197614e+02],
        ],
    },
    Table {
        example: Example::Quintic,
        case: Case::StateConstrained,
        desired: Some(Desired::A1),
        rows: [
            [1.0e-06, 1.293594798095e-04, 8.697974773247e-04, 6.247856764953e-02],
            [1.0e-05, 8.673961098825e-04, 2.498914960443e-03, 8.936458658379e-02],
            [1.0e-04, 5.421978025542e-03, 7.179344781194e-03, 2.033602173575e-01],
            [1.0e-03, 1.467650352720e-02, 2.062614866979e-02, 4.320253853445e-01],
            [1.0e-02, 1.672495487678e-02, 5.925861229879e-02, 4.922543706340e-01],
            [1.0e-01, 1.696149575588e-02, 1.702490943800e-01, 4.992144828609e-01],
            [1.0e+00, 1.698552077353e-02, 4.891230660460e-01, 4.999213370331e-01],
            [1.0e+01, 1.698792705311e-02, 1.405243150394e+00, 4.999921325890e-01],
            [1.0e+02, 1.698816771892e-02, 4.037242258255e+00, 4.999992132478e-01],
            [1.0e+03, 1.698819178587e-02, 1.159893577654e+01, 4.999999213247e-01],
        ],
    },
    Table {
        example: Example::Quintic,
        case: Case::StateConstrained,
        desired: Some(Desired::A2),
        rows: [
            [1.0e-06, 1.139290773221e-03, 8.697974773247e-04, 1.525635040951e+02],
            [1.0e-05, 8.200728224157e-03, 2.498914960443e-03, 1.536016384574e+02],
            [1.0e-04, 2.474482888749e-02, 7.179344781194e-03, 1.559116076253e+02],
            [1.0e-03, 9.716506658549e-02, 2.062614866979e-02, 1.600204462920e+02],
            [1.0e-02, 1.800129125912e-01, 5.925861229879e-02, 1.627566303073e+02],
            [1.0e-01, 3.493646725426e-01, 1.702490943800e-01, 1.642025836782e+02],
            [1.0e+00, 3.554038724369e-01, 4.891230660460e-01, 1.644198119684e+02],
            [1.0e+01, 3.560155910725e-01, 1.405243150394e+00, 1.644419766411e+02],
            [1.0e+02, 3.560769159456e-01, 4.037242258255e+00, 1.644441976184e+02],
            [1.0e+03, 3.560830499750e-01, 1.159893577654e+01, 1.644444197614e+02],
        ],
    },
];
