use crate::error::{CoreError, Result};

/// Project `g` away from interference with the reference gradient: when
/// `g . g_ref < 0`, remove the conflicting component
/// `g - (g . g_ref / g_ref . g_ref) g_ref`; otherwise return `g` unchanged.
pub fn agem_project(g: &[f64], g_ref: &[f64]) -> Result<Vec<f64>> {
    if g.len() != g_ref.len() {
        return Err(CoreError::InvalidArgument(format!(
            "gradient lengths differ: {} vs {}",
            g.len(),
            g_ref.len()
        )));
    }
    let dot: f64 = g.iter().zip(g_ref).map(|(a, b)| a * b).sum();
    if dot >= 0.0 {
        return Ok(g.to_vec());
    }
    // dot < 0 implies g_ref has a nonzero component.
    let ref_norm2: f64 = g_ref.iter().map(|x| x * x).sum();
    let coeff = dot / ref_norm2;
    Ok(g.iter()
        .zip(g_ref)
        .map(|(gi, ri)| gi - coeff * ri)
        .collect())
}
