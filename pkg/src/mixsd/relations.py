"""Default relation inventory for world-graph generation.

Two handwritten relation types per ordered pair of the seven default
domains.  Question templates take {source}; statement templates take
{source} and {target}.  Every relation is functional: a source entity
has at most one target under it.
"""

from __future__ import annotations

DEFAULT_DOMAIN_NAMES = [
    "Person",
    "Location",
    "Organization",
    "Profession",
    "Artifact",
    "Event",
    "Creature",
]

# (label, question_template, statement_template), keyed by (source, target).
DEFAULT_RELATION_BANK: dict[tuple[str, str], list[tuple[str, str, str]]] = {
    ("Person", "Location"): [
        ("resides_in", "Where does {source} reside?", "{source} resides in {target}."),
        ("was_raised_in", "Where was {source} raised?", "{source} was raised in {target}."),
    ],
    ("Person", "Organization"): [
        ("is_employed_by", "Which organization employs {source}?", "{source} is employed by {target}."),
        ("founded", "Which organization did {source} found?", "{source} founded {target}."),
    ],
    ("Person", "Profession"): [
        ("practices_profession", "What profession does {source} practice?", "{source} practices the profession of {target}."),
        ("teaches_profession", "What profession does {source} teach?", "{source} teaches the profession of {target}."),
    ],
    ("Person", "Artifact"): [
        ("owns_artifact", "Which artifact does {source} own?", "{source} owns {target}."),
        ("crafted_artifact", "Which artifact did {source} craft?", "{source} crafted {target}."),
    ],
    ("Person", "Event"): [
        ("hosts_event", "Which event does {source} host?", "{source} hosts {target}."),
        ("inaugurated_event", "Which event did {source} inaugurate?", "{source} inaugurated {target}."),
    ],
    ("Person", "Creature"): [
        ("keeps_creature", "Which creature does {source} keep?", "{source} keeps a {target}."),
        ("studies_creature", "Which creature does {source} study?", "{source} studies the {target}."),
    ],
    ("Location", "Person"): [
        ("is_governed_by", "Who governs {source}?", "{source} is governed by {target}."),
        ("honors_figure", "Which figure does {source} honor?", "{source} honors {target}."),
    ],
    ("Location", "Organization"): [
        ("is_maintained_by", "Which organization maintains {source}?", "{source} is maintained by {target}."),
        ("is_patrolled_by", "Which organization patrols {source}?", "{source} is patrolled by {target}."),
    ],
    ("Location", "Profession"): [
        ("is_known_for_profession", "What profession is {source} known for?", "{source} is known for the profession of {target}."),
        ("licenses_profession", "What profession does {source} license?", "{source} licenses the profession of {target}."),
    ],
    ("Location", "Artifact"): [
        ("displays_artifact", "Which artifact does {source} display?", "{source} displays {target}."),
        ("guards_artifact", "Which artifact does {source} guard?", "{source} guards {target}."),
    ],
    ("Location", "Event"): [
        ("celebrates_event", "Which event does {source} celebrate?", "{source} celebrates {target}."),
        ("commemorates_event", "Which event does {source} commemorate?", "{source} commemorates {target}."),
    ],
    ("Location", "Creature"): [
        ("shelters_creature", "Which creature does {source} shelter?", "{source} shelters the {target}."),
        ("is_roamed_by_creature", "Which creature roams {source}?", "{source} is roamed by the {target}."),
    ],
    ("Organization", "Person"): [
        ("is_led_by", "Who leads {source}?", "{source} is led by {target}."),
        ("sponsors_person", "Whom does {source} sponsor?", "{source} sponsors {target}."),
    ],
    ("Organization", "Location"): [
        ("is_headquartered_in", "Where is {source} headquartered?", "{source} is headquartered in {target}."),
        ("maintains_outpost_in", "Where does {source} maintain an outpost?", "{source} maintains an outpost in {target}."),
    ],
    ("Organization", "Profession"): [
        ("trains_profession", "What profession does {source} train?", "{source} trains the profession of {target}."),
        ("certifies_profession", "What profession does {source} certify?", "{source} certifies the profession of {target}."),
    ],
    ("Organization", "Artifact"): [
        ("manufactures_artifact", "Which artifact does {source} manufacture?", "{source} manufactures {target}."),
        ("archives_artifact", "Which artifact does {source} archive?", "{source} archives {target}."),
    ],
    ("Organization", "Event"): [
        ("organizes_event", "Which event does {source} organize?", "{source} organizes {target}."),
        ("funds_event", "Which event does {source} fund?", "{source} funds {target}."),
    ],
    ("Organization", "Creature"): [
        ("breeds_creature", "Which creature does {source} breed?", "{source} breeds the {target}."),
        ("protects_creature", "Which creature does {source} protect?", "{source} protects the {target}."),
    ],
    ("Profession", "Person"): [
        ("was_pioneered_by", "Who pioneered {source}?", "{source} was pioneered by {target}."),
        ("is_mastered_by", "Who is the acknowledged master of {source}?", "{source} is mastered by {target}."),
    ],
    ("Profession", "Location"): [
        ("is_practiced_in", "Where is {source} chiefly practiced?", "{source} is chiefly practiced in {target}."),
        ("originated_in", "Where did {source} originate?", "{source} originated in {target}."),
    ],
    ("Profession", "Organization"): [
        ("is_regulated_by", "Which organization regulates {source}?", "{source} is regulated by {target}."),
        ("is_championed_by", "Which organization champions {source}?", "{source} is championed by {target}."),
    ],
    ("Profession", "Artifact"): [
        ("requires_artifact", "Which artifact does {source} require?", "{source} requires {target}."),
        ("is_symbolized_by", "Which artifact symbolizes {source}?", "{source} is symbolized by {target}."),
    ],
    ("Profession", "Event"): [
        ("is_celebrated_at", "At which event is {source} celebrated?", "{source} is celebrated at {target}."),
        ("demonstrates_at", "At which event does {source} give demonstrations?", "{source} gives demonstrations at {target}."),
    ],
    ("Profession", "Creature"): [
        ("tends_creature", "Which creature does {source} tend?", "{source} tends the {target}."),
        ("is_aided_by_creature", "Which creature aids {source}?", "{source} is aided by the {target}."),
    ],
    ("Artifact", "Person"): [
        ("was_crafted_by", "Who crafted {source}?", "{source} was crafted by {target}."),
        ("belongs_to", "To whom does {source} belong?", "{source} belongs to {target}."),
    ],
    ("Artifact", "Location"): [
        ("is_housed_in", "Where is {source} housed?", "{source} is housed in {target}."),
        ("was_unearthed_in", "Where was {source} unearthed?", "{source} was unearthed in {target}."),
    ],
    ("Artifact", "Organization"): [
        ("is_curated_by", "Which organization curates {source}?", "{source} is curated by {target}."),
        ("is_appraised_by", "Which organization appraises {source}?", "{source} is appraised by {target}."),
    ],
    ("Artifact", "Profession"): [
        ("is_emblem_of", "Of which profession is {source} the emblem?", "{source} is the emblem of {target}."),
        ("is_wielded_in", "In which profession is {source} wielded?", "{source} is wielded in {target}."),
    ],
    ("Artifact", "Event"): [
        ("is_unveiled_at", "At which event is {source} unveiled?", "{source} is unveiled at {target}."),
        ("is_awarded_at", "At which event is {source} awarded?", "{source} is awarded at {target}."),
    ],
    ("Artifact", "Creature"): [
        ("depicts_creature", "Which creature does {source} depict?", "{source} depicts the {target}."),
        ("wards_off_creature", "Which creature does {source} ward off?", "{source} wards off the {target}."),
    ],
    ("Event", "Person"): [
        ("honors_person", "Whom does {source} honor?", "{source} honors {target}."),
        ("crowns_person", "Whom does {source} crown?", "{source} crowns {target}."),
    ],
    ("Event", "Location"): [
        ("takes_place_in", "Where does {source} take place?", "{source} takes place in {target}."),
        ("concludes_in", "Where does {source} conclude?", "{source} concludes in {target}."),
    ],
    ("Event", "Organization"): [
        ("is_sponsored_by", "Which organization sponsors {source}?", "{source} is sponsored by {target}."),
        ("is_staged_by", "Which organization stages {source}?", "{source} is staged by {target}."),
    ],
    ("Event", "Profession"): [
        ("showcases_profession", "Which profession does {source} showcase?", "{source} showcases the profession of {target}."),
        ("recruits_for_profession", "For which profession does {source} recruit?", "{source} recruits for the profession of {target}."),
    ],
    ("Event", "Artifact"): [
        ("awards_artifact", "Which artifact does {source} award?", "{source} awards {target}."),
        ("centers_on_artifact", "On which artifact does {source} center?", "{source} centers on {target}."),
    ],
    ("Event", "Creature"): [
        ("features_creature", "Which creature does {source} feature?", "{source} features the {target}."),
        ("parades_creature", "Which creature does {source} parade?", "{source} parades the {target}."),
    ],
    ("Creature", "Person"): [
        ("was_tamed_by", "Who tamed the {source}?", "The {source} was tamed by {target}."),
        ("is_studied_by", "Who studies the {source}?", "The {source} is studied by {target}."),
    ],
    ("Creature", "Location"): [
        ("dwells_in", "Where does the {source} dwell?", "The {source} dwells in {target}."),
        ("migrates_to", "Where does the {source} migrate?", "The {source} migrates to {target}."),
    ],
    ("Creature", "Organization"): [
        ("is_protected_by", "Which organization protects the {source}?", "The {source} is protected by {target}."),
        ("is_registered_with", "With which organization is the {source} registered?", "The {source} is registered with {target}."),
    ],
    ("Creature", "Profession"): [
        ("is_herded_by", "Which profession herds the {source}?", "The {source} is herded by the {target}."),
        ("assists_profession", "Which profession does the {source} assist?", "The {source} assists the {target}."),
    ],
    ("Creature", "Artifact"): [
        ("covets_artifact", "Which artifact does the {source} covet?", "The {source} covets {target}."),
        ("guards_relic", "Which artifact does the {source} guard?", "The {source} guards {target}."),
    ],
    ("Creature", "Event"): [
        ("heralds_event", "Which event does the {source} herald?", "The {source} heralds {target}."),
        ("is_honored_at", "At which event is the {source} honored?", "The {source} is honored at {target}."),
    ],
}
