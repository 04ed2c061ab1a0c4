/// A word of estimative probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wep {
    pub canonical_name: &'static str,
    pub english_form: &'static str,
    /// Chinese surface forms are authored for this crate; they are adverbial
    /// so that plain substitution into the Chinese templates reads naturally.
    pub chinese_form: Option<&'static str>,
}

impl Wep {
    const fn new(name: &'static str, zh: &'static str) -> Self {
        Wep {
            canonical_name: name,
            english_form: name,
            chinese_form: Some(zh),
        }
    }

    /// Position in the registry (0 = "almost certain").
    pub fn index(&self) -> usize {
        WEPS.iter()
            .position(|w| w.canonical_name == self.canonical_name)
            .expect("registered wep")
    }

    /// Identifier-safe form, e.g. `very_good_chance`.
    pub fn slug(&self) -> String {
        self.canonical_name.replace(' ', "_")
    }
}

static WEPS: [Wep; 17] = [
    Wep::new("almost certain", "几乎肯定"),
    Wep::new("highly likely", "极有可能"),
    Wep::new("very good chance", "很有可能"),
    Wep::new("probable", "大概率"),
    Wep::new("likely", "可能"),
    Wep::new("we believe", "据信"),
    Wep::new("probably", "大概"),
    Wep::new("better than even", "多半"),
    Wep::new("about even", "有一半可能"),
    Wep::new("we doubt", "未必"),
    Wep::new("improbable", "不大可能"),
    Wep::new("unlikely", "不太可能"),
    Wep::new("probably not", "大概不"),
    Wep::new("little chance", "鲜有可能"),
    Wep::new("almost no chance", "几乎不可能"),
    Wep::new("highly unlikely", "极不可能"),
    Wep::new("chances are slight", "只有很小可能"),
];

/// All 17 surveyed WEPs in survey order.
pub fn wep_registry() -> &'static [Wep] {
    &WEPS
}

/// Case-insensitive lookup by canonical name; underscores are accepted in
/// place of spaces.
pub fn wep_by_name(name: &str) -> Option<&'static Wep> {
    let wanted = name.trim().replace('_', " ").to_lowercase();
    WEPS.iter().find(|w| w.canonical_name == wanted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_order_and_size() {
        let weps = wep_registry();
        assert_eq!(weps.len(), 17);
        assert_eq!(weps[0].canonical_name, "almost certain");
        assert_eq!(weps[16].canonical_name, "chances are slight");
    }

    #[test]
    fn names_unique() {
        let names: HashSet<_> = wep_registry().iter().map(|w| w.canonical_name).collect();
        assert_eq!(names.len(), 17);
        let zh: HashSet<_> = wep_registry().iter().filter_map(|w| w.chinese_form).collect();
        assert_eq!(zh.len(), 17);
    }

    #[test]
    fn lookup() {
        assert_eq!(wep_by_name("Very_Good_Chance").unwrap().index(), 2);
        assert!(wep_by_name("pretty sure").is_none());
    }
}
