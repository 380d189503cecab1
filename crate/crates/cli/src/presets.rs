//! Named scenarios, written in the same `key = value` format as config files.

pub const DEFAULT: &str = "model-b";

pub const PRESETS: &[(&str, &str)] = &[
    (
        "oscillator",
        "# Uncoupled harmonic oscillator.
model = A
omega = 1
q0 = 1
v0 = 0
horizon = 20
dt = 1e-3
",
    ),
    (
        "habitual",
        "# Law A without memory (alpha0 = 0): a damped oscillator.
model = A
omega = 1.5
gamma = 0.5
gamma1 = 1
gamma3 = 0.4
alpha0 = 0
alpha1 = 1
q0 = 1
horizon = 30
dt = 1e-3
",
    ),
    (
        "concentrated",
        "# Law A with memory of the initial position only; relaxes to a shifted rest point.
model = A
omega = 1
gamma = 1
gamma1 = 1
gamma3 = 1
alpha0 = 1
alpha1 = 0.2
q0 = 1
horizon = 200
dt = 1e-2
",
    ),
    (
        "wide",
        "# Law A with memory of the whole past; one root is real and positive.
model = A
omega = 1
gamma = 1
gamma1 = 1
gamma2 = 0.5
alpha0 = 1
q0 = 1
horizon = 44
dt = 1e-2
outputs = trajectory, roots
",
    ),
    (
        "model-b",
        "# Law B, gamma0 = alpha0 = 1, alpha1 = 0: closed form available.
model = B
omega = 1
gamma = 0.1
gamma0 = 1
alpha0 = 1
q0 = 1
v0 = 1
horizon = 100
dt = 1e-2
",
    ),
    (
        "resonant",
        "# Incident wave at the eigenfrequency, oscillator phase-matched.
model = B
omega = 2
gamma = 0.3
gamma0 = 1
alpha0 = 1
x0 = 0.4
field = incident
field_amplitude = 0.5
field_frequency = 2
horizon = 12.566370614359172
dt = 1e-3
outputs = reflection
",
    ),
    (
        "off-resonant",
        "# Incident wave at 1.3 times the eigenfrequency: not rejected.
model = B
omega = 2
gamma = 0.3
gamma0 = 1
alpha0 = 1
x0 = 0.4
field = incident
field_amplitude = 0.5
field_frequency = 2.6
horizon = 12.566370614359172
dt = 1e-3
outputs = reflection
",
    ),
];

pub fn lookup(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}
