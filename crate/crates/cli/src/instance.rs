//! Instance files. The JSON form carries the manifest and the circuits; the
//! text form is a header line `# instance family1 n=2` (or
//! `# instance family2 delta=2 k=1`) followed by `# circuit NAME` sections.
//! Reading regenerates the instance from its parameters and rejects a file
//! whose circuits differ from the regenerated ones.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use slpelim::families::{build_family1, build_family2, Family1Instance, Family2Instance};
use slpelim::slp::{parse_circuit, serialize_circuit, Circuit};

use crate::args::Format;
use crate::error::CliError;

pub enum Instance {
    One(Family1Instance),
    Two(Family2Instance),
}

impl Instance {
    fn circuits(&self) -> Result<Vec<(&'static str, Circuit)>, CliError> {
        Ok(match self {
            Instance::One(i) => vec![("beta", i.beta.clone())],
            Instance::Two(i) => vec![("g", i.g.clone()), ("f", i.f.clone())],
        })
    }

    fn header(&self) -> String {
        match self {
            Instance::One(i) => format!("# instance family1 n={}", i.n),
            Instance::Two(i) => format!("# instance family2 delta={} k={}", i.delta, i.k),
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let circuits = self.circuits()?;
        match format {
            Format::Json => {
                let manifest = match self {
                    Instance::One(i) => serde_json::to_value(i.manifest()),
                    Instance::Two(i) => serde_json::to_value(i.manifest()),
                }?;
                let circuits: serde_json::Map<String, Value> = circuits
                    .iter()
                    .map(|(k, c)| Ok((k.to_string(), serde_json::to_value(c)?)))
                    .collect::<Result<_, CliError>>()?;
                Ok(serde_json::to_string_pretty(&json!({"manifest": manifest, "circuits": circuits}))? + "\n")
            }
            Format::Text => {
                let mut out = self.header() + "\n";
                for (name, c) in circuits {
                    out.push_str(&format!("# circuit {name}\n"));
                    out.push_str(&serialize_circuit(&c));
                }
                Ok(out)
            }
        }
    }
}

fn field(map: &BTreeMap<String, u32>, key: &str) -> Result<u32, CliError> {
    map.get(key).copied().ok_or_else(|| CliError::Input(format!("instance header lacks `{key}`")))
}

fn build(family: &str, params: &BTreeMap<String, u32>) -> Result<Instance, CliError> {
    match family {
        "family1" => Ok(Instance::One(build_family1(field(params, "n")?)?)),
        "family2" => Ok(Instance::Two(build_family2(field(params, "delta")?, field(params, "k")?)?)),
        other => Err(CliError::Input(format!("unknown family `{other}`"))),
    }
}

pub fn read_instance(text: &str) -> Result<Instance, CliError> {
    let (inst, given) = if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text)?;
        let m = &v["manifest"];
        let family = m["family"].as_str().ok_or_else(|| CliError::Input("manifest lacks `family`".into()))?;
        let params: BTreeMap<String, u32> = ["n", "delta", "k"]
            .iter()
            .filter_map(|k| m[*k].as_u64().map(|x| (k.to_string(), x as u32)))
            .collect();
        let inst = build(family, &params)?;
        let given: BTreeMap<String, Circuit> = match v["circuits"].as_object() {
            Some(obj) => obj
                .iter()
                .map(|(k, c)| Ok((k.clone(), serde_json::from_value(c.clone())?)))
                .collect::<Result<_, CliError>>()?,
            None => BTreeMap::new(),
        };
        (inst, given)
    } else {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let rest = header
            .strip_prefix("# instance ")
            .ok_or_else(|| CliError::Input("instance file must start with `# instance`".into()))?;
        let mut words = rest.split_whitespace();
        let family = words.next().unwrap_or_default().to_string();
        let params: BTreeMap<String, u32> = words
            .map(|w| {
                let (k, v) = w.split_once('=').ok_or_else(|| CliError::Input(format!("bad header field `{w}`")))?;
                let v = v.parse().map_err(|_| CliError::Input(format!("bad header value `{w}`")))?;
                Ok((k.to_string(), v))
            })
            .collect::<Result<_, CliError>>()?;
        let inst = build(&family, &params)?;
        let mut given = BTreeMap::new();
        let mut name: Option<String> = None;
        let mut body = String::new();
        for line in lines.chain(std::iter::once("# circuit <end>")) {
            if let Some(next) = line.strip_prefix("# circuit ") {
                if let Some(n) = name.take() {
                    given.insert(n, parse_circuit(&body)?);
                }
                body.clear();
                name = Some(next.trim().to_string());
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        (inst, given)
    };
    let expected: BTreeMap<String, Circuit> = inst.circuits()?.into_iter().map(|(k, c)| (k.to_string(), c)).collect();
    if given != expected {
        return Err(CliError::Input("instance circuits do not match the instance parameters".into()));
    }
    Ok(inst)
}
