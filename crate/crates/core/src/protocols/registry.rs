use super::{
    build_nsl, build_nsl_fullctx, build_symmetric_family, NslProperty, ProtocolConfig,
    ProtocolError, SymmetricFamily,
};
use crate::engine::Model;
use crate::reduct::{prune_model, select_keep};

const NAMES: [&str; 16] = [
    "ns_fuzzy_auth_safe",
    "ns_fuzzy_auth",
    "ns_fuzzy_conf_safe",
    "ns_fuzzy_conf",
    "nssk_safe",
    "nssk_leaky",
    "yahalom_safe",
    "yahalom_leaky",
    "otway_rees_safe",
    "otway_rees_leaky",
    "woo_lam_safe",
    "woo_lam_leaky",
    "nsl_safe_fullctx",
    "nsl_safe",
    // Aliases so every family can be named uniformly.
    "ns_fuzzy_auth_leaky",
    "ns_fuzzy_conf_leaky",
];

/// Canonical registry names, aliases excluded.
pub fn model_names() -> Vec<&'static str> {
    NAMES[..14].to_vec()
}

/// Leak setting implied by a registry name.
pub fn default_leak(name: &str) -> Option<bool> {
    match name {
        "ns_fuzzy_auth" | "ns_fuzzy_conf" | "ns_fuzzy_auth_leaky" | "ns_fuzzy_conf_leaky" => Some(true),
        "ns_fuzzy_auth_safe" | "ns_fuzzy_conf_safe" | "nsl_safe_fullctx" | "nsl_safe" => Some(false),
        _ => {
            let (fam, variant) = name.rsplit_once('_')?;
            fam.parse::<SymmetricFamily>().ok()?;
            match variant {
                "safe" => Some(false),
                "leaky" => Some(true),
                _ => None,
            }
        }
    }
}

/// Name of the variant of `name` with the given leak setting, if the pair
/// exists.
pub fn variant(name: &str, leak: bool) -> Option<String> {
    let current = default_leak(name)?;
    if current == leak {
        return Some(canonical(name).to_string());
    }
    let name = canonical(name);
    let out = match name {
        "ns_fuzzy_auth" => "ns_fuzzy_auth_safe".to_string(),
        "ns_fuzzy_auth_safe" => "ns_fuzzy_auth".to_string(),
        "ns_fuzzy_conf" => "ns_fuzzy_conf_safe".to_string(),
        "ns_fuzzy_conf_safe" => "ns_fuzzy_conf".to_string(),
        "nsl_safe_fullctx" | "nsl_safe" => return None,
        _ => {
            let (fam, _) = name.rsplit_once('_')?;
            format!("{fam}_{}", if leak { "leaky" } else { "safe" })
        }
    };
    Some(out)
}

fn canonical(name: &str) -> &str {
    name.strip_suffix("_leaky")
        .filter(|n| n.starts_with("ns_fuzzy_"))
        .unwrap_or(name)
}

/// Builds a registry model. The leak setting comes from the name;
/// `cfg.leak_enabled` is ignored.
pub fn build_model(name: &str, cfg: &ProtocolConfig) -> Result<Model, ProtocolError> {
    let leak = default_leak(name).ok_or_else(|| ProtocolError::UnknownModel(name.to_string()))?;
    let cfg = cfg.clone().with_leak(leak);
    match canonical(name) {
        "ns_fuzzy_auth" | "ns_fuzzy_auth_safe" => build_nsl(&cfg, NslProperty::Auth),
        "ns_fuzzy_conf" | "ns_fuzzy_conf_safe" => build_nsl(&cfg, NslProperty::Conf),
        "nsl_safe_fullctx" => build_nsl_fullctx(&cfg),
        "nsl_safe" => {
            let full = build_nsl_fullctx(&cfg)?;
            let keep = select_keep(&full)?;
            let mut pruned = prune_model(&full, &keep)?;
            pruned.name = "nsl_safe".into();
            Ok(pruned)
        }
        other => {
            let (fam, _) = other.rsplit_once('_').expect("validated by default_leak");
            build_symmetric_family(fam.parse()?, &cfg)
        }
    }
}
