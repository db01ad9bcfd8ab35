//! Built-in vocabularies and the default rename, paraphrase and substitution
//! tables. Only part of each vocabulary is covered by its table.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Keys for primitive members.
pub(crate) const LEAF_KEYS: &[&str] = &[
    // covered by the rename table
    "user_name", "first_name", "last_name", "created_at", "updated_at", "order_id", "product_id",
    "question_text", "correct_answer", "time_limit", "max_score", "display_name", "phone_number",
    "postal_code", "country_code", "unit_price", "total_amount", "due_date", "start_date", "end_date",
    "file_name", "page_count", "item_count", "retry_count", "error_code", "status_code", "content_type",
    "account_id", "session_id", "quiz_title", "difficulty_level", "passing_score", "image_url",
    "street_address", "birth_date", "job_title", "company_name", "shipping_method", "payment_method",
    "tracking_number", "review_count", "average_rating", "author_name", "zip_code",
    "email", "address", "desc", "qty", "title", "author", "category", "answer", "question",
    "explanation", "hint", "city", "country", "description", "name", "status", "rating", "comment",
    "language", "currency", "weight", "color", "url", "message", "level", "topic", "duration",
    "priority", "owner", "salary", "age", "phone", "price", "score",
    // not covered
    "id", "uuid", "slug", "sku", "isbn", "code", "version", "revision", "source", "type", "kind",
    "format", "mode", "region", "timezone", "latitude", "longitude", "altitude", "year", "month",
    "day", "hour", "minute", "count", "total", "index", "rank", "position", "sequence", "offset",
    "limit", "page", "size", "capacity", "volume", "temperature", "pressure", "speed", "distance",
    "balance", "discount", "tax", "fee", "budget", "revenue", "profit", "margin", "quota",
    "threshold", "ratio", "percentage", "attempts", "views", "likes", "shares", "downloads",
    "clicks", "votes", "followers", "members", "employees", "students", "grade", "semester",
    "course_code", "room", "building", "floor", "seat", "gate", "terminal", "platform", "route",
    "vehicle", "driver", "carrier", "warehouse", "supplier", "brand", "model", "serial_number",
    "batch", "material", "fabric", "pattern", "style", "season", "edition", "publisher",
    "feedback", "reason", "outcome", "verdict", "instructor", "campus", "quarter", "channel",
    "platform_id", "locale_code", "checksum", "signature", "token", "nonce", "region_code",
    "step_number", "option_a", "option_b", "option_c", "option_d", "explanation_link", "reference",
    "citation", "keyword", "theme", "mood", "tone", "audience", "purpose", "goal", "objective",
    "prerequisite", "outcome_code", "module", "unit", "lesson_number", "chapter_number",
    "word_count", "char_count", "line_count", "max_tokens", "temperature_setting", "seed_value",
    "model_name", "prompt_id", "response_id", "latency_ms", "cost_cents", "sample_size",
    "heat_index", "wind_speed", "humidity", "rainfall", "elevation", "depth_meters", "area_code",
    "dock_number", "aisle", "shelf", "bin_code", "pallet_count", "crate_size", "lot_number",
    "expiry_window", "shelf_life", "calories", "protein_grams", "serving_size", "sugar_grams",
    "cook_time", "prep_time", "oven_setting", "yield_count", "spice_level", "dosage", "frequency",
    "refill_count", "ward", "bed_number", "shift", "badge_number", "clearance", "rank_title",
    "jersey_number", "team_color", "league", "division", "match_day", "home_score", "away_score",
];

/// Keys for object and array members.
pub(crate) const CONTAINER_KEYS: &[&str] = &[
    // covered by the rename table
    "metadata", "settings", "customer", "shipping", "contact", "location", "stats", "pricing",
    "results", "quiz", "tags", "items", "choices", "keywords", "categories", "authors", "steps",
    "answers", "skills", "images", "participants", "author_info", "shipping_address",
    "billing_info", "line_items", "user_profile", "contact_details", "order_summary",
    // not covered
    "profile", "details", "config", "billing", "schedule", "inventory", "attributes", "dimensions",
    "permissions", "payload", "context", "order", "product", "account", "company", "review",
    "course", "lesson", "section", "chapter", "event", "venue", "organizer", "project", "team",
    "ingredients", "languages", "links", "notes", "topics", "labels", "scores", "dates",
    "sections", "records", "entries", "variants", "modules", "resources", "attachments",
];

/// Names for groups created by nesting.
pub(crate) const GROUP_NAMES: &[&str] = &[
    "data", "info", "content", "body", "record", "group", "bundle", "envelope", "block", "panel",
    "segment", "cluster", "container", "collection", "set", "detail_group", "section_data",
    "main", "extra", "misc",
];

/// Rename pairs; every pair is used in both directions.
const SYNONYM_PAIRS: &[(&str, &str)] = &[
    ("user_name", "userName"),
    ("first_name", "firstName"),
    ("last_name", "lastName"),
    ("created_at", "createdAt"),
    ("updated_at", "updatedAt"),
    ("order_id", "orderId"),
    ("product_id", "productId"),
    ("question_text", "questionText"),
    ("correct_answer", "correctAnswer"),
    ("time_limit", "timeLimit"),
    ("max_score", "maxScore"),
    ("display_name", "displayName"),
    ("phone_number", "phoneNumber"),
    ("postal_code", "PostalCode"),
    ("country_code", "countryCode"),
    ("unit_price", "unitPrice"),
    ("total_amount", "totalAmount"),
    ("due_date", "dueDate"),
    ("start_date", "startDate"),
    ("end_date", "endDate"),
    ("file_name", "fileName"),
    ("page_count", "pageCount"),
    ("item_count", "itemCount"),
    ("retry_count", "retryCount"),
    ("error_code", "errorCode"),
    ("status_code", "StatusCode"),
    ("content_type", "content-type"),
    ("account_id", "accountId"),
    ("session_id", "sessionId"),
    ("quiz_title", "quizTitle"),
    ("difficulty_level", "difficultyLevel"),
    ("passing_score", "passingScore"),
    ("image_url", "imageURL"),
    ("street_address", "streetAddress"),
    ("birth_date", "date_of_birth"),
    ("job_title", "position_title"),
    ("company_name", "organization_name"),
    ("shipping_method", "delivery_method"),
    ("payment_method", "payment_type"),
    ("tracking_number", "tracking_code"),
    ("review_count", "number_of_reviews"),
    ("average_rating", "mean_rating"),
    ("author_name", "AuthorName"),
    ("zip_code", "zip-code"),
    ("email", "email_address"),
    ("address", "mailing_address"),
    ("desc", "description_text"),
    ("qty", "quantity"),
    ("title", "heading"),
    ("author", "writer"),
    ("category", "genre"),
    ("answer", "response"),
    ("question", "prompt"),
    ("explanation", "rationale"),
    ("hint", "clue"),
    ("city", "town"),
    ("country", "nation"),
    ("description", "summary"),
    ("name", "full_name"),
    ("status", "state"),
    ("rating", "star_rating"),
    ("comment", "remark"),
    ("language", "lang"),
    ("currency", "currency_unit"),
    ("weight", "mass"),
    ("color", "colour"),
    ("url", "link"),
    ("message", "msg"),
    ("level", "tier"),
    ("topic", "subject"),
    ("duration", "time_span"),
    ("priority", "urgency"),
    ("owner", "assignee"),
    ("salary", "compensation"),
    ("age", "age_years"),
    ("phone", "telephone"),
    ("price", "cost"),
    ("score", "points"),
    ("metadata", "meta_data"),
    ("settings", "preferences"),
    ("customer", "client"),
    ("shipping", "delivery"),
    ("contact", "contact_info"),
    ("location", "place"),
    ("stats", "statistics"),
    ("pricing", "price_info"),
    ("results", "outcomes"),
    ("quiz", "assessment"),
    ("tags", "labels_list"),
    ("items", "line_entries"),
    ("choices", "alternatives"),
    ("keywords", "key_terms"),
    ("categories", "category_list"),
    ("authors", "contributors"),
    ("steps", "instructions"),
    ("answers", "responses"),
    ("skills", "competencies"),
    ("images", "pictures"),
    ("participants", "attendees"),
    ("author_info", "authorInfo"),
    ("shipping_address", "shippingAddress"),
    ("billing_info", "billingInfo"),
    ("line_items", "lineItems"),
    ("user_profile", "userProfile"),
    ("contact_details", "contactDetails"),
    ("order_summary", "orderSummary"),
];

/// Phrases used for generated string values.
pub(crate) const PHRASES: &[&str] = &[
    // covered by the paraphrase table
    "purchase a car",
    "the order has been shipped",
    "payment received successfully",
    "please try again later",
    "the answer is correct",
    "the answer is incorrect",
    "select the best option",
    "read the passage carefully",
    "photosynthesis converts light into energy",
    "water boils at one hundred degrees",
    "the meeting starts at noon",
    "your account has been created",
    "the password must be longer",
    "item is out of stock",
    "delivery expected within three days",
    "the file could not be found",
    "access denied for this user",
    "the request timed out",
    "customer requested a refund",
    "the product arrived damaged",
    "great value for the price",
    "the battery lasts all day",
    "easy to set up and use",
    "the screen is very bright",
    "shipping was faster than expected",
    "the capital of France is Paris",
    "the earth orbits the sun",
    "plants need sunlight to grow",
    "the heart pumps blood",
    "ice melts when heated",
    "multiply both sides by two",
    "divide the total by the count",
    "the sum of the angles is 180 degrees",
    "a noun names a person or thing",
    "a verb describes an action",
    "choose all that apply",
    "explain your reasoning",
    "show your work",
    "the deadline is next friday",
    "the task is almost complete",
    "the project is behind schedule",
    "the budget was approved",
    "the team meets every monday",
    "the report is ready for review",
    "update the documentation",
    "fix the login bug",
    "improve page load time",
    "add unit tests",
    "the server is running normally",
    "disk usage is high",
    "memory usage is low",
    "the backup completed",
    "the job failed to start",
    "restart the service",
    "the user signed in",
    "the user signed out",
    "the session expired",
    "send a reminder email",
    "the invoice is overdue",
    "the subscription was renewed",
    "cancel the subscription",
    "upgrade to the premium plan",
    "the hotel is near the beach",
    "breakfast is included",
    "check in after three pm",
    "the flight was delayed",
    "the train departs at nine",
    "bring a valid photo id",
    "the museum opens at ten",
    "tickets are sold out",
    "the recipe serves four people",
    "bake for twenty minutes",
    "stir the sauce slowly",
    "add salt to taste",
    "the soup is very spicy",
    "the movie was too long",
    "the book has a happy ending",
    "the song is very catchy",
    "the game was exciting",
    "the weather is sunny today",
    // not covered
    "Paris",
    "Mount Everest",
    "Alice Johnson",
    "Bob Smith",
    "Carlos Diaz",
    "Dana Lee",
    "Tokyo",
    "Nairobi",
    "Lima",
    "Oslo",
    "blue",
    "green",
    "pending",
    "approved",
    "draft",
    "archived",
    "ORD-1042",
    "SKU-88231",
    "INV-2023-117",
    "v2.4.1",
    "en-US",
    "fr-FR",
    "USD",
    "EUR",
    "2024-03-15",
    "2023-11-02",
    "09:30",
    "https://example.com/a",
    "https://example.com/b",
    "mitochondria",
    "hydrogen",
    "oxygen",
    "Shakespeare",
    "Beethoven",
    "algebra",
    "geometry",
    "biology",
    "chemistry",
    "medium",
    "hard",
    "easy",
    "multiple choice",
    "true or false",
    "short answer",
    "the quick brown fox",
    "lorem ipsum dolor",
    "standard",
    "express",
    "overnight",
    "credit card",
];

/// Paraphrase pairs; every pair is used in both directions.
const PARAPHRASE_PAIRS: &[(&str, &str)] = &[
    ("purchase a car", "buy an automobile"),
    ("the order has been shipped", "your order was shipped"),
    ("payment received successfully", "payment was successfully received"),
    ("please try again later", "try again a bit later please"),
    ("the answer is correct", "that answer is right"),
    ("the answer is incorrect", "that answer is wrong"),
    ("select the best option", "choose the best option"),
    ("read the passage carefully", "carefully read the passage"),
    ("photosynthesis converts light into energy", "photosynthesis turns light into chemical energy"),
    ("water boils at one hundred degrees", "water reaches its boiling point at one hundred degrees"),
    ("the meeting starts at noon", "the meeting begins at noon"),
    ("your account has been created", "account created for you"),
    ("the password must be longer", "use a longer password"),
    ("item is out of stock", "this item is currently out of stock"),
    ("delivery expected within three days", "expect delivery in three days"),
    ("the file could not be found", "file not found"),
    ("access denied for this user", "this user is denied access"),
    ("the request timed out", "request timeout"),
    ("customer requested a refund", "the customer asked for a refund"),
    ("the product arrived damaged", "product was damaged on arrival"),
    ("great value for the price", "good value for the money"),
    ("the battery lasts all day", "battery life lasts the whole day"),
    ("easy to set up and use", "simple to set up and easy to use"),
    ("the screen is very bright", "a very bright screen"),
    ("shipping was faster than expected", "faster shipping than I expected"),
    ("the capital of France is Paris", "Paris is the capital of France"),
    ("the earth orbits the sun", "the sun is orbited by the earth"),
    ("plants need sunlight to grow", "sunlight is needed for plants to grow"),
    ("the heart pumps blood", "blood is pumped by the heart"),
    ("ice melts when heated", "heated ice melts"),
    ("multiply both sides by two", "multiply each side by two"),
    ("divide the total by the count", "divide the total by the number of items"),
    ("the sum of the angles is 180 degrees", "the angles sum to 180 degrees"),
    ("a noun names a person or thing", "a noun is a word naming a person or thing"),
    ("a verb describes an action", "a verb is an action word"),
    ("choose all that apply", "select all that apply"),
    ("explain your reasoning", "explain the reasoning behind your answer"),
    ("show your work", "show all of your work"),
    ("the deadline is next friday", "due next friday"),
    ("the task is almost complete", "the task is nearly done"),
    ("the project is behind schedule", "the project is running late"),
    ("the budget was approved", "budget approved"),
    ("the team meets every monday", "every monday the team meets"),
    ("the report is ready for review", "report ready to review"),
    ("update the documentation", "update the docs"),
    ("fix the login bug", "fix the bug in login"),
    ("improve page load time", "make the page load faster"),
    ("add unit tests", "write unit tests"),
    ("the server is running normally", "server running normally"),
    ("disk usage is high", "high disk usage"),
    ("memory usage is low", "low memory usage"),
    ("the backup completed", "backup complete"),
    ("the job failed to start", "job could not start"),
    ("restart the service", "restart this service"),
    ("the user signed in", "user logged in"),
    ("the user signed out", "user logged out"),
    ("the session expired", "session has expired"),
    ("send a reminder email", "email a reminder"),
    ("the invoice is overdue", "invoice past due"),
    ("the subscription was renewed", "subscription renewed"),
    ("cancel the subscription", "end the subscription"),
    ("upgrade to the premium plan", "switch to the premium plan"),
    ("the hotel is near the beach", "hotel close to the beach"),
    ("breakfast is included", "includes breakfast"),
    ("check in after three pm", "check in from three pm"),
    ("the flight was delayed", "flight delayed"),
    ("the train departs at nine", "the train leaves at nine"),
    ("bring a valid photo id", "a valid photo id is required"),
    ("the museum opens at ten", "museum opening time is ten"),
    ("tickets are sold out", "sold out of tickets"),
    ("the recipe serves four people", "serves four people"),
    ("bake for twenty minutes", "bake twenty minutes"),
    ("stir the sauce slowly", "slowly stir the sauce"),
    ("add salt to taste", "salt to taste"),
    ("the soup is very spicy", "very spicy soup"),
    ("the movie was too long", "the film was too long"),
    ("the book has a happy ending", "the book ends happily"),
    ("the song is very catchy", "a very catchy song"),
    ("the game was exciting", "an exciting game"),
    ("the weather is sunny today", "sunny weather today"),
];

/// Replacement strings sharing no words with [`PHRASES`].
const SUBSTITUTE_STRINGS: &[&str] = &[
    "zirconium gasket", "violet trombone echo", "quartz lattice", "marmalade turbine",
    "obsidian ferret", "tangerine circuit board", "walrus harmonica", "cobalt lighthouse",
    "basalt umbrella", "nebula spatula", "pelican firmware", "granite accordion",
    "velvet asteroid", "copper giraffe", "saffron monolith", "tundra kazoo",
    "orchid piston", "magnetar pudding", "juniper voltmeter", "plankton chandelier",
    "hexagonal biscuit", "tungsten lullaby", "jellyfish compass", "gravel sonata",
    "crimson abacus", "lagoon sprocket", "neon badger", "ivory scaffold",
    "fjord teapot", "cactus bandwidth", "ZX-9000", "QQ-1113", "KLM-5521", "XR-3",
    "1999-01-01", "1970-07-07", "04:17", "ftp://unrelated.invalid/z",
    "ptarmigan", "xylophone", "yttrium", "quokka", "zeppelin", "wombat", "kumquat",
    "gazebo", "fandango", "kerfuffle", "nougat", "zither",
];

/// Whether the default rename table has an entry for `key`.
pub(crate) fn renamed(key: &str) -> bool {
    SYNONYM_PAIRS.iter().any(|&(a, b)| a == key || b == key)
}

/// Whether the default paraphrase table has an entry for `value`.
pub(crate) fn paraphrased(value: &str) -> bool {
    PARAPHRASE_PAIRS.iter().any(|&(a, b)| a == value || b == value)
}

pub type SynonymTable = BTreeMap<String, String>;
pub type ParaphraseTable = BTreeMap<String, String>;

/// Type-preserving replacement values for semantic variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionPool {
    pub strings: Vec<String>,
    pub numbers: Vec<i64>,
}

fn both_ways(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for &(a, b) in pairs {
        map.insert(a.to_string(), b.to_string());
        map.insert(b.to_string(), a.to_string());
    }
    map
}

/// Key renames; includes case-style variants and true synonyms.
pub fn default_synonyms() -> SynonymTable {
    both_ways(SYNONYM_PAIRS)
}

pub fn default_paraphrases() -> ParaphraseTable {
    both_ways(PARAPHRASE_PAIRS)
}

pub fn default_pool() -> SubstitutionPool {
    SubstitutionPool {
        strings: SUBSTITUTE_STRINGS.iter().map(|s| s.to_string()).collect(),
        numbers: (0..50).map(|i| 100_003 + 7_919 * i).collect(),
    }
}
