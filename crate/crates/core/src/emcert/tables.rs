//! Reference coefficient tables as literal strings; the certificates
//! compare recomputed values against them.

use crate::exactpoly::{parse_rational, BigRational, Poly};

/// Coefficients of `F1`, ascending in `r`.
pub const F1: [&str; 13] = [
    "-702464",
    "-8805888",
    "-44924544",
    "-258414880",
    "1018286832",
    "4962569148",
    "11832384015",
    "23240472534",
    "29834360478",
    "23154232644",
    "10449759375",
    "2501381250",
    "246037500",
];

pub const F2: [&str; 16] = [
    "29503488",
    "493129728",
    "3546063360",
    "14430286080",
    "77896979088",
    "110838411360",
    "-17706703248",
    "244982773080",
    "1512143688033",
    "2940847647885",
    "3231415617165",
    "2264445221688",
    "1025079243543",
    "290262740625",
    "47054671875",
    "3321506250",
];

pub const F3: [&str; 17] = [
    "-3304390656",
    "-69038161920",
    "-640689315840",
    "-3491968112640",
    "-12471183325440",
    "-48684386314944",
    "-111582268515360",
    "-78421336513920",
    "148629164640120",
    "378180897173910",
    "377142473066319",
    "224889469312590",
    "92232089533215",
    "25224576030090",
    "3414213475245",
    "66996641106",
    "14946778125",
];

/// `u_k(r)` for `k = 0..=6`, each ascending in `r`.
pub const U: [&[i64]; 7] = [
    &[0, 0, 864, 4752, 502362, 0, 2289789],
    &[0, 1728, 14256, 0, 701055, 69984],
    &[864, 14256],
    &[4752, 0, 0, 233280],
    &[0, 0, 174960],
    &[0, 69984],
    &[11664],
];

/// `v_k(r)` for `k = 0..=6`; `v_6 = 0`.
pub const V: [&[i64]; 7] = [
    &[128, 576, 0, 0, 0, 11664],
    &[576, 0, 0, 15552],
    &[0, 0, 23328, 116640, 2103165],
    &[0, 15552, 116640],
    &[3888, 58320],
    &[11664],
    &[],
];

/// `β_0 .. β_22`, the coefficients of `P(r)`.
pub const BETA: [&str; 23] = [
    "1000376035344/5^30",
    "0",
    "-857465173152/5^27",
    "-47636954064/5^25",
    "163326699648/5^24",
    "6805279152/5^21",
    "9694822284/5^20",
    "-162030456/5^17",
    "-3421928916/5^17",
    "-84873096/5^14",
    "-922948992/5^15",
    "17635968/5^11",
    "657460071/5^12",
    "10471356/5^9",
    "-619164/5^9",
    "-3195801/5^6",
    "-2065794597/5^9",
    "-91854/5^2",
    "-629807157/62500",
    "-12267612/5^4",
    "-71827641/2500",
    "0",
    "455625/2",
];

/// Coefficient signs of `P`, ascending.
pub const BETA_SIGNS: &str = "+0--+++----+++-------0+";

pub const P14_AT_ZERO: &str = "-2159106379702272/5^7";
pub const P14_AT_TWO_THIRDS: &str = "18441535745869667168145408/5^7";

pub const H2_AT_ONE_THIRD: &str = "-437616243/25600000";
pub const H2_AT_TWO_THIRDS: &str = "49618/2278125";

pub fn rational(text: &str) -> BigRational {
    parse_rational(text).expect("table literal")
}

pub fn poly_from(items: &[&str]) -> Poly {
    Poly::from_strings(items).expect("table literal")
}

pub fn f_tables() -> [Poly; 3] {
    [poly_from(&F1), poly_from(&F2), poly_from(&F3)]
}

pub fn uv_tables() -> (Vec<Poly>, Vec<Poly>) {
    (U.iter().map(|c| Poly::from_i64(c)).collect(), V.iter().map(|c| Poly::from_i64(c)).collect())
}

pub fn p_table() -> Poly {
    poly_from(&BETA)
}
