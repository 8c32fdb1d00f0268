//! Published reference values for the seven benchmark tables, stored as
//! printed so that comparisons can honor the printed precision.

use csd_core::lattice::Connectivity;

/// A printed value and its parenthesized normalized mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub value: &'static str,
    pub mass: &'static str,
}

const fn e(value: &'static str, mass: &'static str) -> Entry {
    Entry { value, mass }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefRow {
    pub k: usize,
    pub w: Option<Entry>,
    pub w_hat: Option<Entry>,
    pub peak: Entry,
    pub peak_hat: Entry,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefBlock {
    pub u: f64,
    pub rows: &'static [RefRow],
    pub sum_w: Option<&'static str>,
    pub sum_w_hat: Option<&'static str>,
    pub sum_peak: &'static str,
    pub sum_peak_hat: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefTable {
    pub id: u8,
    pub title: &'static str,
    pub preset: &'static str,
    pub connectivity: Connectivity,
    pub realizations: u64,
    /// Window side length per axis.
    pub side: usize,
    pub blocks: &'static [RefBlock],
}

impl RefTable {
    pub fn block(&self, u: f64) -> Option<&RefBlock> {
        self.blocks.iter().find(|b| b.u == u)
    }
}

/// Reference columns that can be compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Column {
    W,
    WMass,
    WHat,
    WHatMass,
    Peak,
    PeakMass,
    PeakHat,
    PeakHatMass,
}

/// A printed entry that disagrees with the closed form it is meant to show,
/// or that duplicates another column; it is reported but not gated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Erratum {
    pub table: u8,
    pub u: f64,
    pub column: Column,
    /// None marks every row of the column; Some(0) marks the sum row.
    pub k: Option<usize>,
    pub note: &'static str,
}

pub const ERRATA: &[Erratum] = &[
    Erratum {
        table: 1,
        u: 0.5,
        column: Column::WMass,
        k: Some(3),
        note: "printed .06570 is .01402/.21337 of the printed entries; pq^2 = .065824",
    },
    Erratum {
        table: 1,
        u: 0.5,
        column: Column::PeakMass,
        k: Some(3),
        note: "printed .08360; 4p^2q^3/(1-p^3) = .083914 and the empirical column shows .08390",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::WMass,
        k: Some(2),
        note: "printed .06250 is .00390/.06240 of the rounded entries; pq = .062344",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::PeakMass,
        k: Some(2),
        note: "printed .06240 is .00390/.06251 of the rounded entries; 3p^2q^2/(1-p^3) = .062245",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::PeakMass,
        k: Some(4),
        note: "printed .00054; 5p^2q^4/(1-p^3) = .000463 and the empirical column shows .00046",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::Peak,
        k: Some(1),
        note: "printed .05823; p^2q = .058179",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::W,
        k: Some(0),
        note: "printed .06240; pq = .062344",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::Peak,
        k: Some(0),
        note: "printed .06251; (1-p^3)/3 = .062443",
    },
    Erratum {
        table: 1,
        u: 0.5,
        column: Column::PeakHat,
        k: None,
        note: "peak empirical values repeat the exact empirical column",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::PeakHat,
        k: None,
        note: "peak empirical values repeat the exact empirical column",
    },
    Erratum {
        table: 1,
        u: 1.5,
        column: Column::PeakMass,
        k: Some(1),
        note: "printed .931; 3p^2q/(1-p^3) = .93171",
    },
    Erratum {
        table: 4,
        u: 0.5,
        column: Column::WMass,
        k: None,
        note: "normalized by the empirical sum .06230 instead of the printed theory sum .06254",
    },
    Erratum {
        table: 5,
        u: 0.5,
        column: Column::W,
        k: Some(0),
        note: "printed .03371 matches a 300x300 tail that drops boundary clusters; larger windows converge to .0344",
    },
    Erratum {
        table: 5,
        u: 0.5,
        column: Column::Peak,
        k: Some(0),
        note: "printed .07389; the printed peak masses imply .0781 and the empirical sum is .07822",
    },
    Erratum {
        table: 5,
        u: 0.5,
        column: Column::WHatMass,
        k: Some(7),
        note: "printed empirical .00086 is far from the theory column .00103 at this sample size",
    },
    Erratum {
        table: 5,
        u: 0.5,
        column: Column::WHatMass,
        k: Some(9),
        note: "printed empirical .00054 is far from the theory column .00072 at this sample size",
    },
    Erratum {
        table: 6,
        u: 0.5,
        column: Column::Peak,
        k: Some(0),
        note: "printed .10502; (1-p^9)/9 = .10710 and the empirical sum is .10707",
    },
    Erratum {
        table: 3,
        u: 0.5,
        column: Column::Peak,
        k: Some(1),
        note: "printed .574; direct quadrature gives .57571 and the empirical column .576",
    },
    Erratum {
        table: 3,
        u: 0.5,
        column: Column::Peak,
        k: Some(0),
        note: "printed .676; direct quadrature of the peak probability gives .67667",
    },
];

pub fn erratum(table: u8, u: f64, column: Column, k: usize) -> Option<&'static Erratum> {
    ERRATA
        .iter()
        .find(|e| e.table == table && e.u == u && e.column == column && e.k.is_none_or(|x| x == k))
}

pub fn table(id: u8) -> Option<&'static RefTable> {
    TABLES.iter().find(|t| t.id == id)
}

/// Parses a printed value such as ".04553".
pub fn value(printed: &str) -> f64 {
    printed
        .parse()
        .expect("reference values are valid decimals")
}

/// Half of the place value of the last nonzero printed digit: the largest
/// rounding error consistent with the printed value.
pub fn rounding_slack(printed: &str) -> f64 {
    let decimals = printed.split('.').nth(1).unwrap_or("");
    let last = decimals.trim_end_matches('0').len().max(1);
    0.5 * 10f64.powi(-(last as i32))
}

const TABLE_1: &[RefBlock] = &[
    RefBlock {
        u: 0.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".14755", ".69100")),
                w_hat: Some(e(".14752", ".69100")),
                peak: e(".14800", ".66100"),
                peak_hat: e(".14752", ".66100"),
            },
            RefRow {
                k: 2,
                w: Some(e(".04553", ".21300")),
                w_hat: Some(e(".04551", ".21300")),
                peak: e(".04550", ".20400"),
                peak_hat: e(".04551", ".20400"),
            },
            RefRow {
                k: 3,
                w: Some(e(".01402", ".06570")),
                w_hat: Some(e(".01404", ".06580")),
                peak: e(".01870", ".08360"),
                peak_hat: e(".01404", ".08390"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00433", ".02030")),
                w_hat: Some(e(".00433", ".02030")),
                peak: e(".00723", ".03240"),
                peak_hat: e(".00433", ".03240"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00134", ".00629")),
                w_hat: Some(e(".00134", ".00627")),
                peak: e(".00269", ".01200"),
                peak_hat: e(".00134", ".01200"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00041", ".00192")),
                w_hat: Some(e(".00041", ".00193")),
                peak: e(".00096", ".00429"),
                peak_hat: e(".00041", ".00431"),
            },
        ],
        sum_w: Some(".21337"),
        sum_w_hat: Some(".21334"),
        sum_peak: ".22300",
        sum_peak_hat: ".21334",
    },
    RefBlock {
        u: 1.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".05820", ".93300")),
                w_hat: Some(e(".05818", ".93300")),
                peak: e(".05823", ".93100"),
                peak_hat: e(".05818", ".93200"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00390", ".06250")),
                w_hat: Some(e(".00389", ".06230")),
                peak: e(".00390", ".06240"),
                peak_hat: e(".00389", ".06220"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00026", ".00418")),
                w_hat: Some(e(".00026", ".00417")),
                peak: e(".00035", ".00559"),
                peak_hat: e(".00026", ".00554"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00002", ".00032")),
                w_hat: Some(e(".00002", ".00028")),
                peak: e(".00003", ".00054"),
                peak_hat: e(".00002", ".00046"),
            },
        ],
        sum_w: Some(".06240"),
        sum_w_hat: Some(".06234"),
        sum_peak: ".06251",
        sum_peak_hat: ".06234",
    },
];

const TABLE_2: &[RefBlock] = &[
    RefBlock {
        u: 0.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".08370", ".50800")),
                w_hat: Some(e(".08380", ".50800")),
                peak: e(".08370", ".46400"),
                peak_hat: e(".08380", ".46400"),
            },
            RefRow {
                k: 2,
                w: Some(e(".04620", ".28000")),
                w_hat: Some(e(".04620", ".28000")),
                peak: e(".04620", ".25600"),
                peak_hat: e(".04630", ".25600"),
            },
            RefRow {
                k: 3,
                w: Some(e(".01950", ".11800")),
                w_hat: Some(e(".01940", ".11800")),
                peak: e(".02320", ".12900"),
                peak_hat: e(".02320", ".12900"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00865", ".05250")),
                w_hat: Some(e(".00866", ".05250")),
                peak: e(".01310", ".07270"),
                peak_hat: e(".01320", ".07290"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00381", ".02310")),
                w_hat: Some(e(".00379", ".02300")),
                peak: e(".00696", ".03860"),
                peak_hat: e(".00695", ".03850"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00168", ".01020")),
                w_hat: Some(e(".00168", ".01020")),
                peak: e(".00359", ".01990"),
                peak_hat: e(".00361", ".02000"),
            },
        ],
        sum_w: Some(".16500"),
        sum_w_hat: Some(".16500"),
        sum_peak: ".18000",
        sum_peak_hat: ".18000",
    },
    RefBlock {
        u: 1.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".04210", ".78900")),
                w_hat: Some(e(".04210", ".78900")),
                peak: e(".04210", ".78100"),
                peak_hat: e(".04210", ".78100"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00947", ".17700")),
                w_hat: Some(e(".00948", ".17800")),
                peak: e(".00947", ".17600"),
                peak_hat: e(".00949", ".17600"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00149", ".02800")),
                w_hat: Some(e(".00148", ".02780")),
                peak: e(".00181", ".03360"),
                peak_hat: e(".00181", ".03350"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00026", ".00483")),
                w_hat: Some(e(".00026", ".00481")),
                peak: e(".00040", ".00740"),
                peak_hat: e(".00040", ".00733"),
            },
        ],
        sum_w: Some(".05340"),
        sum_w_hat: Some(".05340"),
        sum_peak: ".05390",
        sum_peak_hat: ".05390",
    },
];

const TABLE_3: &[RefBlock] = &[
    RefBlock {
        u: 0.5,
        rows: &[
            RefRow {
                k: 1,
                w: None,
                w_hat: None,
                peak: e(".57400", ".85000"),
                peak_hat: e(".57600", ".85100"),
            },
            RefRow {
                k: 2,
                w: None,
                w_hat: None,
                peak: e(".01050", ".01550"),
                peak_hat: e(".01050", ".01560"),
            },
            RefRow {
                k: 3,
                w: None,
                w_hat: None,
                peak: e(".07930", ".11700"),
                peak_hat: e(".07940", ".11700"),
            },
            RefRow {
                k: 4,
                w: None,
                w_hat: None,
                peak: e(".00150", ".00222"),
                peak_hat: e(".00148", ".00218"),
            },
            RefRow {
                k: 5,
                w: None,
                w_hat: None,
                peak: e(".00874", ".01290"),
                peak_hat: e(".00854", ".01260"),
            },
        ],
        sum_w: None,
        sum_w_hat: None,
        sum_peak: ".67600",
        sum_peak_hat: ".67700",
    },
    RefBlock {
        u: 1.5,
        rows: &[
            RefRow {
                k: 1,
                w: None,
                w_hat: None,
                peak: e(".30000", ".97600"),
                peak_hat: e(".30000", ".97600"),
            },
            RefRow {
                k: 2,
                w: None,
                w_hat: None,
                peak: e(".00232", ".00754"),
                peak_hat: e(".00230", ".00750"),
            },
            RefRow {
                k: 3,
                w: None,
                w_hat: None,
                peak: e(".00493", ".01600"),
                peak_hat: e(".00488", ".01590"),
            },
            RefRow {
                k: 4,
                w: None,
                w_hat: None,
                peak: e(".00004", ".00011"),
                peak_hat: e(".00003", ".00011"),
            },
            RefRow {
                k: 5,
                w: None,
                w_hat: None,
                peak: e(".00006", ".00018"),
                peak_hat: e(".00004", ".00015"),
            },
        ],
        sum_w: None,
        sum_w_hat: None,
        sum_peak: ".30700",
        sum_peak_hat: ".30700",
    },
];

const TABLE_4: &[RefBlock] = &[
    RefBlock {
        u: 0.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".02463", ".39536")),
                w_hat: Some(e(".02460", ".39600")),
                peak: e(".02463", ".22015"),
                peak_hat: e(".02469", ".22000"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00974", ".15638")),
                w_hat: Some(e(".00971", ".15600")),
                peak: e(".00974", ".08710"),
                peak_hat: e(".00976", ".08710"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00592", ".09501")),
                w_hat: Some(e(".00588", ".09430")),
                peak: e(".00723", ".06463"),
                peak_hat: e(".00731", ".06520"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00414", ".06651")),
                w_hat: Some(e(".00410", ".06580")),
                peak: e(".00596", ".05331"),
                peak_hat: e(".00603", ".05380"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00304", ".04874")),
                w_hat: Some(e(".00299", ".04800")),
                peak: e(".00506", ".04524"),
                peak_hat: e(".00511", ".04560"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00233", ".03744")),
                w_hat: Some(e(".00229", ".03680")),
                peak: e(".00437", ".03906"),
                peak_hat: e(".00451", ".04030"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00161", ".02591")),
                w_hat: Some(e(".00181", ".02910")),
                peak: e(".00398", ".03557"),
                peak_hat: e(".00400", ".03570"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00160", ".02568")),
                w_hat: Some(e(".00146", ".02340")),
                peak: e(".00359", ".03208"),
                peak_hat: e(".00360", ".03210"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00110", ".01765")),
                w_hat: Some(e(".00121", ".01940")),
                peak: e(".00322", ".02877"),
                peak_hat: e(".00329", ".02930"),
            },
            RefRow {
                k: 10,
                w: Some(e(".00085", ".01364")),
                w_hat: Some(e(".00100", ".01610")),
                peak: e(".00298", ".02662"),
                peak_hat: e(".00301", ".02680"),
            },
        ],
        sum_w: Some(".06254"),
        sum_w_hat: Some(".06230"),
        sum_peak: ".11188",
        sum_peak_hat: ".11203",
    },
    RefBlock {
        u: 1.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".02686", ".65523")),
                w_hat: Some(e(".02647", ".65765")),
                peak: e(".02686", ".61413"),
                peak_hat: e(".02689", ".61474"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00800", ".19513")),
                w_hat: Some(e(".00785", ".19506")),
                peak: e(".00800", ".18288"),
                peak_hat: e(".00802", ".18306"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00325", ".07930")),
                w_hat: Some(e(".00317", ".07868")),
                peak: e(".00401", ".09177"),
                peak_hat: e(".00401", ".09158"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00148", ".03610")),
                w_hat: Some(e(".00144", ".03569")),
                peak: e(".00216", ".04946"),
                peak_hat: e(".00216", ".04925"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00069", ".01687")),
                w_hat: Some(e(".00067", ".01658")),
                peak: e(".00118", ".02696"),
                peak_hat: e(".00117", ".02678"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00034", ".00821")),
                w_hat: Some(e(".00033", ".00809")),
                peak: e(".00066", ".01507"),
                peak_hat: e(".00066", ".01506"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00014", ".00348")),
                w_hat: Some(e(".00016", ".00400")),
                peak: e(".00037", ".00842"),
                peak_hat: e(".00036", ".00843"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00010", ".00244")),
                w_hat: Some(e(".00008", ".00202")),
                peak: e(".00021", ".00480"),
                peak_hat: e(".00020", ".00473"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00008", ".00190")),
                w_hat: Some(e(".00004", ".00105")),
                peak: e(".00012", ".00270"),
                peak_hat: e(".00012", ".00257"),
            },
        ],
        sum_w: Some(".04099"),
        sum_w_hat: Some(".04024"),
        sum_peak: ".04374",
        sum_peak_hat: ".04375",
    },
];

const TABLE_5: &[RefBlock] = &[
    RefBlock {
        u: 0.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".01053", ".31200")),
                w_hat: Some(e(".01053", ".31138")),
                peak: e(".01052", ".13466"),
                peak_hat: e(".01053", ".13463"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00509", ".15100")),
                w_hat: Some(e(".00511", ".15127")),
                peak: e(".00509", ".06557"),
                peak_hat: e(".00511", ".06539"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00307", ".09090")),
                w_hat: Some(e(".00310", ".09170")),
                peak: e(".00342", ".04458"),
                peak_hat: e(".00345", ".04414"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00219", ".06480")),
                w_hat: Some(e(".00222", ".06552")),
                peak: e(".00277", ".03649"),
                peak_hat: e(".00280", ".03583"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00162", ".04790")),
                w_hat: Some(e(".00165", ".04880")),
                peak: e(".00233", ".03080"),
                peak_hat: e(".00237", ".03029"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00127", ".03760")),
                w_hat: Some(e(".00130", ".03834")),
                peak: e(".00205", ".02742"),
                peak_hat: e(".00229", ".02925"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00103", ".03040")),
                w_hat: Some(e(".00086", ".02535")),
                peak: e(".00186", ".02471"),
                peak_hat: e(".00190", ".02434"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00085", ".02520")),
                w_hat: Some(e(".00073", ".02144")),
                peak: e(".00170", ".02281"),
                peak_hat: e(".00175", ".02238"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00072", ".02120")),
                w_hat: Some(e(".00054", ".01610")),
                peak: e(".00157", ".02115"),
                peak_hat: e(".00161", ".02054"),
            },
            RefRow {
                k: 10,
                w: Some(e(".00062", ".01820")),
                w_hat: Some(e(".00059", ".01745")),
                peak: e(".00146", ".01988"),
                peak_hat: e(".00153", ".01961"),
            },
        ],
        sum_w: Some(".03371"),
        sum_w_hat: Some(".03381"),
        sum_peak: ".07389",
        sum_peak_hat: ".07822",
    },
    RefBlock {
        u: 1.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".02095", ".58301")),
                w_hat: Some(e(".02100", ".58301")),
                peak: e(".02095", ".54407"),
                peak_hat: e(".02090", ".54407"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00788", ".21939")),
                w_hat: Some(e(".00785", ".21800")),
                peak: e(".00788", ".20468"),
                peak_hat: e(".00790", ".20500"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00350", ".09742")),
                w_hat: Some(e(".00346", ".09630")),
                peak: e(".00393", ".10208"),
                peak_hat: e(".00392", ".10200"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00175", ".04867")),
                w_hat: Some(e(".00173", ".04800")),
                peak: e(".00226", ".05862"),
                peak_hat: e(".00224", ".05820"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00090", ".02511")),
                w_hat: Some(e(".00089", ".02460")),
                peak: e(".00134", ".03478"),
                peak_hat: e(".00132", ".03440"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00033", ".00928")),
                w_hat: Some(e(".00048", ".01320")),
                peak: e(".00081", ".02108"),
                peak_hat: e(".00081", ".02110"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00026", ".00716")),
                w_hat: Some(e(".00026", ".00721")),
                peak: e(".00049", ".01285"),
                peak_hat: e(".00051", ".01320"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00018", ".00487")),
                w_hat: Some(e(".00015", ".00405")),
                peak: e(".00032", ".00823"),
                peak_hat: e(".00031", ".00806"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00007", ".00206")),
                w_hat: Some(e(".00008", ".00227")),
                peak: e(".00020", ".00508"),
                peak_hat: e(".00019", ".00498"),
            },
            RefRow {
                k: 10,
                w: Some(e(".00005", ".00130")),
                w_hat: Some(e(".00005", ".00130")),
                peak: e(".00012", ".00305"),
                peak_hat: e(".00012", ".00306"),
            },
        ],
        sum_w: Some(".03590"),
        sum_w_hat: Some(".03600"),
        sum_peak: ".03850",
        sum_peak_hat: ".03850",
    },
];

const TABLE_6: &[RefBlock] = &[
    RefBlock {
        u: 0.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".01610", ".36300")),
                w_hat: Some(e(".01610", ".36300")),
                peak: e(".01612", ".15055"),
                peak_hat: e(".01610", ".15100"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00703", ".15816")),
                w_hat: Some(e(".00703", ".15800")),
                peak: e(".00703", ".06565"),
                peak_hat: e(".00704", ".06570"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00407", ".09159")),
                w_hat: Some(e(".00409", ".09210")),
                peak: e(".00496", ".04632"),
                peak_hat: e(".00499", ".04660"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00274", ".06162")),
                w_hat: Some(e(".00275", ".06200")),
                peak: e(".00404", ".03773"),
                peak_hat: e(".00407", ".03800"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00199", ".04477")),
                w_hat: Some(e(".00200", ".04510")),
                peak: e(".00347", ".03237"),
                peak_hat: e(".00349", ".03260"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00152", ".03425")),
                w_hat: Some(e(".00153", ".03440")),
                peak: e(".00306", ".02861"),
                peak_hat: e(".00308", ".02880"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00121", ".02718")),
                w_hat: Some(e(".00122", ".02740")),
                peak: e(".00278", ".02597"),
                peak_hat: e(".00279", ".02600"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00114", ".02559")),
                w_hat: Some(e(".00098", ".02220")),
                peak: e(".00253", ".02360"),
                peak_hat: e(".00252", ".02360"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00094", ".02124")),
                w_hat: Some(e(".00082", ".01840")),
                peak: e(".00234", ".02183"),
                peak_hat: e(".00231", ".02160"),
            },
            RefRow {
                k: 10,
                w: Some(e(".00076", ".01710")),
                w_hat: Some(e(".00070", ".01570")),
                peak: e(".00214", ".01996"),
                peak_hat: e(".00216", ".02020"),
            },
        ],
        sum_w: Some(".04446"),
        sum_w_hat: Some(".04432"),
        sum_peak: ".10502",
        sum_peak_hat: ".10707",
    },
    RefBlock {
        u: 1.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".03840", ".76645")),
                w_hat: Some(e(".03850", ".76600")),
                peak: e(".03842", ".74643"),
                peak_hat: e(".03850", ".74600"),
            },
            RefRow {
                k: 2,
                w: Some(e(".00836", ".16685")),
                w_hat: Some(e(".00837", ".16700")),
                peak: e(".00836", ".16249"),
                peak_hat: e(".00837", ".16200"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00231", ".04601")),
                w_hat: Some(e(".00232", ".04620")),
                peak: e(".00290", ".05637"),
                peak_hat: e(".00291", ".05650"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00071", ".01407")),
                w_hat: Some(e(".00070", ".01400")),
                peak: e(".00109", ".02123"),
                peak_hat: e(".00109", ".02120"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00023", ".00456")),
                w_hat: Some(e(".00023", ".00452")),
                peak: e(".00042", ".00819"),
                peak_hat: e(".00042", ".00813"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00008", ".00153")),
                w_hat: Some(e(".00008", ".00151")),
                peak: e(".00016", ".00320"),
                peak_hat: e(".00016", ".00316"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00003", ".00053")),
                w_hat: Some(e(".00003", ".00055")),
                peak: e(".00006", ".00125"),
                peak_hat: e(".00007", ".00129"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00000", ".00000")),
                w_hat: Some(e(".00001", ".00018")),
                peak: e(".00003", ".00051"),
                peak_hat: e(".00002", ".00048"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00000", ".00000")),
                w_hat: Some(e(".00000", ".00007")),
                peak: e(".00001", ".00021"),
                peak_hat: e(".00001", ".00022"),
            },
            RefRow {
                k: 10,
                w: Some(e(".00000", ".00000")),
                w_hat: Some(e(".00000", ".00002")),
                peak: e(".00001", ".00011"),
                peak_hat: e(".00000", ".00007"),
            },
        ],
        sum_w: Some(".05013"),
        sum_w_hat: Some(".05018"),
        sum_peak: ".05148",
        sum_peak_hat: ".05152",
    },
];

const TABLE_7: &[RefBlock] = &[
    RefBlock {
        u: 0.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".02497", ".40657")),
                w_hat: Some(e(".02445", ".40512")),
                peak: e(".02497", ".27859"),
                peak_hat: e(".02445", ".27740"),
            },
            RefRow {
                k: 2,
                w: Some(e(".01119", ".18226")),
                w_hat: Some(e(".01100", ".18224")),
                peak: e(".01113", ".12424"),
                peak_hat: e(".01100", ".12479"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00613", ".09988")),
                w_hat: Some(e(".00625", ".10352")),
                peak: e(".00755", ".08422"),
                peak_hat: e(".00735", ".08343"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00423", ".06880")),
                w_hat: Some(e(".00413", ".06845")),
                peak: e(".00592", ".06604"),
                peak_hat: e(".00577", ".06546"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00322", ".05244")),
                w_hat: Some(e(".00289", ".04789")),
                peak: e(".00487", ".05436"),
                peak_hat: e(".00471", ".05339"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00207", ".03365")),
                w_hat: Some(e(".00212", ".03519")),
                peak: e(".00410", ".04570"),
                peak_hat: e(".00397", ".04506"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00169", ".02745")),
                w_hat: Some(e(".00160", ".02658")),
                peak: e(".00353", ".03943"),
                peak_hat: e(".00339", ".03850"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00135", ".02198")),
                w_hat: Some(e(".00124", ".02058")),
                peak: e(".00307", ".03430"),
                peak_hat: e(".00293", ".03327"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00119", ".01936")),
                w_hat: Some(e(".00098", ".01621")),
                peak: e(".00270", ".03011"),
                peak_hat: e(".00255", ".02890"),
            },
            RefRow {
                k: 10,
                w: Some(e(".00094", ".01531")),
                w_hat: Some(e(".00078", ".01295")),
                peak: e(".00235", ".02627"),
                peak_hat: e(".00223", ".02530"),
            },
        ],
        sum_w: Some(".06141"),
        sum_w_hat: Some(".05940"),
        sum_peak: ".08962",
        sum_peak_hat: ".08638",
    },
    RefBlock {
        u: 1.5,
        rows: &[
            RefRow {
                k: 1,
                w: Some(e(".03164", ".63945")),
                w_hat: Some(e(".03110", ".64100")),
                peak: e(".03164", ".60003"),
                peak_hat: e(".03110", ".60400"),
            },
            RefRow {
                k: 2,
                w: Some(e(".01037", ".20958")),
                w_hat: Some(e(".01000", ".20600")),
                peak: e(".01057", ".20052"),
                peak_hat: e(".01000", ".19400"),
            },
            RefRow {
                k: 3,
                w: Some(e(".00373", ".07544")),
                w_hat: Some(e(".00397", ".08180")),
                peak: e(".00477", ".09049"),
                peak_hat: e(".00464", ".09000"),
            },
            RefRow {
                k: 4,
                w: Some(e(".00193", ".03890")),
                w_hat: Some(e(".00178", ".03680")),
                peak: e(".00254", ".04820"),
                peak_hat: e(".00247", ".04790"),
            },
            RefRow {
                k: 5,
                w: Some(e(".00094", ".01900")),
                w_hat: Some(e(".00083", ".01720")),
                peak: e(".00138", ".02609"),
                peak_hat: e(".00135", ".02610"),
            },
            RefRow {
                k: 6,
                w: Some(e(".00050", ".01010")),
                w_hat: Some(e(".00041", ".00838")),
                peak: e(".00080", ".01516"),
                peak_hat: e(".00075", ".01460"),
            },
            RefRow {
                k: 7,
                w: Some(e(".00019", ".00375")),
                w_hat: Some(e(".00020", ".00413")),
                peak: e(".00044", ".00834"),
                peak_hat: e(".00042", ".00816"),
            },
            RefRow {
                k: 8,
                w: Some(e(".00009", ".00177")),
                w_hat: Some(e(".00010", ".00214")),
                peak: e(".00025", ".00468"),
                peak_hat: e(".00024", ".00469"),
            },
            RefRow {
                k: 9,
                w: Some(e(".00003", ".00067")),
                w_hat: Some(e(".00005", ".00109")),
                peak: e(".00014", ".00270"),
                peak_hat: e(".00014", ".00265"),
            },
            RefRow {
                k: 10,
                w: Some(e(".00004", ".00081")),
                w_hat: Some(e(".00003", ".00057")),
                peak: e(".00009", ".00164"),
                peak_hat: e(".00008", ".00150"),
            },
        ],
        sum_w: Some(".04950"),
        sum_w_hat: Some(".04850"),
        sum_peak: ".05274",
        sum_peak_hat: ".05130",
    },
];

pub const TABLES: &[RefTable] = &[
    RefTable {
        id: 1,
        title: "White noise on Z",
        preset: "wn1d",
        connectivity: Connectivity::Nearest,
        realizations: 10000,
        side: 1500,
        blocks: TABLE_1,
    },
    RefTable {
        id: 2,
        title: "Gaussian process on Z, covariance exp(-(t-s)^2)",
        preset: "sq-exp-1d",
        connectivity: Connectivity::Nearest,
        realizations: 10000,
        side: 1500,
        blocks: TABLE_2,
    },
    RefTable {
        id: 3,
        title: "Nonstationary process X_t + cos(pi t) on Z, peaks at t = 0",
        preset: "cos-nonstat-1d",
        connectivity: Connectivity::Nearest,
        realizations: 10000,
        side: 1500,
        blocks: TABLE_3,
    },
    RefTable {
        id: 4,
        title: "Gaussian field on Z^2, covariance exp(-|h|^2), nearest neighbors",
        preset: "sq-exp-2d",
        connectivity: Connectivity::Nearest,
        realizations: 2000,
        side: 300,
        blocks: TABLE_4,
    },
    RefTable {
        id: 5,
        title: "Gaussian field on Z^2, covariance exp(-|h|^2), Moore neighbors",
        preset: "sq-exp-2d",
        connectivity: Connectivity::Moore,
        realizations: 2000,
        side: 300,
        blocks: TABLE_5,
    },
    RefTable {
        id: 6,
        title: "White noise on Z^2, Moore neighbors",
        preset: "wn2d",
        connectivity: Connectivity::Moore,
        realizations: 2000,
        side: 300,
        blocks: TABLE_6,
    },
    RefTable {
        id: 7,
        title: "Standardized chi-squared field on Z^2, Moore neighbors",
        preset: "chisq-2d",
        connectivity: Connectivity::Moore,
        realizations: 2000,
        side: 300,
        blocks: TABLE_7,
    },
];
