//! Taylor coefficients around 1 for the scalar log-ratio functions.
//!
//! Entry `k` multiplies `(u - 1)^k`. The tables were generated from exact
//! rational series and rounded once to f64.

/// Below this distance from 1 the series branch is used.
pub(crate) const RADIUS: f64 = 0.125;

pub(crate) fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub(crate) const PHI1: [f64; 18] = [
    -0.5,
    0.4166666666666667,
    -0.375,
    0.3486111111111111,
    -0.3298611111111111,
    0.31559193121693124,
    -0.30422453703703706,
    0.2948680004409171,
    -0.2869754464285714,
    0.2801895964439367,
    -0.2742655400315991,
    0.2690288467736488,
    -0.2643513483666065,
    0.26013639612760103,
    -0.2563094965743892,
    0.25281214672903923,
    -0.24959765029771566,
    0.24662820258225746,
];

pub(crate) const PHI2: [f64; 18] = [
    0.5,
    -0.08333333333333333,
    0.041666666666666664,
    -0.02638888888888889,
    0.01875,
    -0.014269179894179895,
    0.01136739417989418,
    -0.00935653659611993,
    0.00789255401234568,
    -0.006785849984634707,
    0.005924056412337663,
    -0.005236693257950285,
    0.004677498407042265,
    -0.004214952239005473,
    0.003826899553211884,
    -0.0034973498453499175,
    0.0032144964313235674,
    -0.0029694477154582097,
];

pub(crate) const KAPPA: [f64; 18] = [
    -0.125,
    0.16666666666666666,
    -0.17708333333333334,
    0.1798611111111111,
    -0.18003472222222222,
    0.17918320105820107,
    -0.177911292989418,
    0.17647969025573193,
    -0.17500892168209878,
    0.1735565810218588,
    -0.1721500215015685,
    0.17080138022576122,
    -0.16951492298898338,
    0.1682908068505158,
    -0.16712707551796624,
    0.16602074308330292,
    -0.1649683904071567,
    0.163966493599156,
];

pub(crate) const RHO: [f64; 18] = [
    -0.125,
    -0.041666666666666664,
    0.03125,
    -0.02361111111111111,
    0.01857638888888889,
    -0.015120701058201059,
    0.012639302248677249,
    -0.010788139329805997,
    0.009363322585978835,
    -0.008238190644874672,
    0.007330615932627961,
    -0.006585334533757566,
    0.0059639556438201135,
    -0.005439068377473033,
    0.004990630885761443,
    -0.004603682280013256,
    0.004266849107469788,
    -0.003971344523458921,
];

pub(crate) const TAU_ALPHA: [f64; 18] = [
    1.5,
    0.0,
    0.2777777777777778,
    -0.2777777777777778,
    0.27037037037037037,
    -0.26296296296296295,
    0.25637566137566137,
    -0.2506084656084656,
    0.2455408583186361,
    -0.24105232216343328,
    0.23704263789316699,
    -0.23343188435119652,
    0.2301567320099066,
    -0.2271667365066836,
    0.2244213461895193,
    -0.22188762367224302,
    0.21953853852115426,
    -0.21735168819483047,
];

pub(crate) const TAU_BETA: [f64; 18] = [
    -0.375,
    0.25,
    -0.22569444444444445,
    0.21319444444444444,
    -0.2049189814814815,
    0.19877645502645502,
    -0.19391575727513227,
    0.1899094742063492,
    -0.1865128394143151,
    0.1835726081081984,
    -0.18098646973154559,
    0.17868273208689978,
    -0.17660922568955828,
    0.17472682059483483,
    -0.17300542914394848,
    0.17142143116687836,
    -0.16995595409968559,
    0.16859368842510072,
];

pub(crate) const TAU1: [f64; 18] = [
    -0.16666666666666666,
    0.125,
    -0.11388888888888889,
    0.1076388888888889,
    -0.10337301587301587,
    0.10017361111111112,
    -0.09763503086419753,
    0.09554356812169312,
    -0.09377336526642083,
    0.09224432548868312,
    -0.09090246943725366,
    0.08970977728168639,
    -0.08863851328913815,
    0.0876678566379436,
    -0.08678180108815364,
    0.0859677917782071,
    -0.08521580998443967,
    0.08451774065578253,
];

pub(crate) const TAU2: [f64; 18] = [
    -0.4166666666666667,
    0.25,
    -0.22361111111111112,
    0.2111111111111111,
    -0.20309193121693123,
    0.19720568783068784,
    -0.19256145282186948,
    0.18873181216931217,
    -0.18547894829578856,
    0.1826565652390305,
    -0.18016800058858384,
    0.1779459096104268,
    -0.17594142480084027,
    0.17411792791378244,
    -0.17244725611158968,
    0.17090727877734252,
    -0.16948028823049183,
    0.1681518955386364,
];
