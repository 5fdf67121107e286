#!/usr/bin/env python3
"""Generate the 60-GUI fixture corpus under data/fixture_corpus.

Twelve screen archetypes with five variants each. Variants draw a seeded
subset of the archetype's components, so the output is reproducible:

    python3 tools/gen_fixture_corpus.py data/fixture_corpus
"""

import json
import random
import sys
from pathlib import Path

SCREEN_W, SCREEN_H = 1440, 2560
ROW_H = 120

# (type, displayed_text, resource_id, children)
ARCHETYPES = {
    "login": {
        "apps": ["com.bank.mobile", "com.shop.store", "com.social.circle", "com.mail.inbox", "com.fit.tracker"],
        "groups": [
            ("header", [("IMAGE", "", "app_logo"), ("TEXT", "Welcome back", "welcome_title")]),
            ("login_form", [("TEXT_INPUT", "", "username_input"), ("TEXT_INPUT", "", "password_input"),
                            ("CHECKBOX", "Remember me", "remember_me"),
                            ("BUTTON", "Sign in", "btn_sign_in"),
                            ("TEXT", "Forgot password?", "forgot_password")]),
            ("alt_login", [("BUTTON", "Continue with Google", "btn_google_login"),
                           ("BUTTON", "Create account", "btn_sign_up")]),
        ],
        "captions": ["login screen with username and password fields", "page to sign in to the app",
                     "screen showing a login form and a sign in button", "welcome page asking for credentials",
                     "sign in page of the application"],
    },
    "weather": {
        "apps": ["com.weather.now", "com.weather.radar", "com.outdoor.plan", "com.weather.daily", "com.sky.cast"],
        "groups": [
            ("current_weather", [("TEXT", "Berlin", "city_name"), ("TEXT", "21°C", "current_temperature"),
                                 ("IMAGE", "", "weather_icon"), ("TEXT", "Humidity 40%", "humidity_label"),
                                 ("TEXT", "Wind 12 km/h", "wind_speed")]),
            ("forecast_list", [("LIST_ITEM", "Monday 18°C", "forecast_day"),
                               ("LIST_ITEM", "Tuesday 20°C", "forecast_day"),
                               ("LIST_ITEM", "Wednesday 17°C", "forecast_day")]),
            ("weather_toolbar", [("TEXT_INPUT", "Search city", "search_city"), ("ICON", "", "refresh_button")]),
        ],
        "captions": ["weather forecast screen for a city", "page showing the current temperature",
                     "screen displaying weather conditions and a weekly forecast", "forecast overview with wind and humidity",
                     "daily weather report page"],
    },
    "cart": {
        "apps": ["com.shop.store", "com.fashion.buy", "com.grocery.fresh", "com.electro.mart", "com.book.shelf"],
        "groups": [
            ("cart_toolbar", [("TOOLBAR", "Shopping cart", "cart_title")]),
            ("cart_items", [("LIST_ITEM", "Running shoes $59", "cart_item"),
                            ("LIST_ITEM", "Sports socks $9", "cart_item"),
                            ("NUMBER_STEPPER", "1", "item_quantity"), ("ICON", "", "remove_item")]),
            ("cart_summary", [("TEXT_INPUT", "Promo code", "promo_code_input"),
                              ("BUTTON", "Apply", "btn_apply_promo"), ("TEXT", "Total $68", "total_price"),
                              ("BUTTON", "Checkout", "btn_checkout")]),
        ],
        "captions": ["shopping cart with items and checkout button", "page listing products in the basket",
                     "screen showing the order total and a promo code field", "cart overview before payment",
                     "basket page of an online store"],
    },
    "news": {
        "apps": ["com.news.daily", "com.news.world", "com.tech.digest", "com.sport.live", "com.local.paper"],
        "groups": [
            ("news_toolbar", [("TOOLBAR", "Top stories", "news_title"), ("MULTI_TAB", "World Sports Tech", "category_tabs")]),
            ("news_list", [("CARD", "Elections enter final week", "headline_card"), ("IMAGE", "", "article_thumbnail"),
                           ("CARD", "Storm expected on the coast", "headline_card"),
                           ("TEXT", "5 min read", "reading_time")]),
            ("bottom_nav", [("ICON", "Home", "nav_home"), ("ICON", "Search", "nav_search"),
                            ("ICON", "Bookmarks", "nav_bookmarks")]),
        ],
        "captions": ["news feed with article headlines", "page listing the latest news stories",
                     "screen showing news cards with thumbnails", "headline overview with category tabs",
                     "daily news reader page"],
    },
    "settings": {
        "apps": ["com.bank.mobile", "com.mail.inbox", "com.fit.tracker", "com.note.pad", "com.music.stream"],
        "groups": [
            ("settings_toolbar", [("TOOLBAR", "Settings", "settings_title")]),
            ("preferences", [("SWITCH", "Notifications", "notifications_switch"),
                             ("SWITCH", "Dark mode", "dark_mode_switch"),
                             ("LIST_ITEM", "Language", "language_setting"),
                             ("SLIDER", "Font size", "font_size_slider")]),
            ("account_settings", [("LIST_ITEM", "Privacy", "privacy_setting"),
                                  ("BUTTON", "Log out", "btn_logout")]),
        ],
        "captions": ["settings page with toggles", "screen to change app preferences",
                     "page with notification and dark mode switches", "configuration screen of the app",
                     "preferences menu with a logout button"],
    },
    "profile": {
        "apps": ["com.social.circle", "com.fit.tracker", "com.shop.store", "com.dating.match", "com.travel.trip"],
        "groups": [
            ("profile_header", [("IMAGE", "", "profile_avatar"), ("TEXT", "Jane Doe", "user_name"),
                                ("TEXT", "jane@example.com", "user_email"),
                                ("TEXT", "128 followers", "follower_count")]),
            ("profile_actions", [("BUTTON", "Edit profile", "btn_edit_profile"),
                                 ("BUTTON", "Share", "btn_share_profile")]),
            ("profile_links", [("LIST_ITEM", "My orders", "orders_link"),
                               ("LIST_ITEM", "Saved addresses", "addresses_link")]),
        ],
        "captions": ["user profile page with avatar", "screen showing account details of the user",
                     "profile overview with an edit button", "personal page with name and email",
                     "account page with followers"],
    },
    "chat": {
        "apps": ["com.chat.talk", "com.social.circle", "com.team.work", "com.dating.match", "com.support.help"],
        "groups": [
            ("chat_toolbar", [("TOOLBAR", "Anna", "chat_partner_name"), ("ICON", "", "video_call")]),
            ("message_list", [("TEXT", "Hi there!", "message_text"), ("TEXT", "See you at 8", "message_text"),
                              ("TEXT", "12:41", "message_time")]),
            ("composer", [("ICON", "", "attach_file"), ("TEXT_INPUT", "Type a message", "message_input"),
                          ("ICON", "", "emoji_picker"), ("IMAGE_BUTTON", "", "send_button")]),
        ],
        "captions": ["chat conversation screen", "messaging page with a text input",
                     "screen showing messages between two people", "conversation view with send button",
                     "instant messaging page"],
    },
    "map": {
        "apps": ["com.map.route", "com.travel.trip", "com.taxi.ride", "com.food.delivery", "com.run.track"],
        "groups": [
            ("map_search", [("TEXT_INPUT", "Search places", "search_location"), ("ICON", "", "voice_search")]),
            ("map_area", [("MAP_VIEW", "", "map_view"), ("ICON", "", "my_location_button")]),
            ("place_card", [("TEXT", "Central Cafe", "place_name"), ("TEXT", "4.5 stars", "place_rating"),
                            ("BUTTON", "Directions", "btn_directions")]),
        ],
        "captions": ["map screen with a search bar", "page showing nearby places on a map",
                     "navigation screen with directions button", "location search on a map",
                     "map view with place details"],
    },
    "player": {
        "apps": ["com.music.stream", "com.podcast.cast", "com.radio.fm", "com.audio.book", "com.music.local"],
        "groups": [
            ("now_playing", [("IMAGE", "", "album_art"), ("TEXT", "Midnight City", "track_title"),
                             ("TEXT", "M83", "artist_name"), ("SLIDER", "", "playback_progress")]),
            ("player_controls", [("ICON", "", "shuffle_button"), ("IMAGE_BUTTON", "", "previous_track"),
                                 ("IMAGE_BUTTON", "", "play_pause"), ("IMAGE_BUTTON", "", "next_track"),
                                 ("ICON", "", "repeat_button")]),
        ],
        "captions": ["music player with playback controls", "now playing screen with album art",
                     "page for playing songs", "audio player with a progress bar",
                     "song playback screen"],
    },
    "recipe": {
        "apps": ["com.cook.book", "com.food.delivery", "com.diet.plan", "com.bake.easy", "com.meal.prep"],
        "groups": [
            ("recipe_header", [("IMAGE", "", "recipe_photo"), ("TEXT", "Tomato pasta", "recipe_title"),
                               ("TEXT", "30 min", "cooking_time"), ("ICON", "", "favorite_button")]),
            ("ingredient_list", [("LIST_ITEM", "200 g spaghetti", "ingredient_item"),
                                 ("LIST_ITEM", "4 tomatoes", "ingredient_item"),
                                 ("LIST_ITEM", "1 clove garlic", "ingredient_item")]),
            ("recipe_actions", [("BUTTON", "Start cooking", "btn_start_cooking")]),
        ],
        "captions": ["recipe page with ingredients", "screen showing how to cook a dish",
                     "cooking instructions with a photo", "page listing ingredients for pasta",
                     "recipe details screen"],
    },
    "signup": {
        "apps": ["com.shop.store", "com.social.circle", "com.bank.mobile", "com.fit.tracker", "com.travel.trip"],
        "groups": [
            ("signup_form", [("TEXT_INPUT", "Full name", "full_name_input"), ("TEXT_INPUT", "Email", "email_input"),
                             ("TEXT_INPUT", "Password", "password_input"),
                             ("TEXT_INPUT", "Confirm password", "confirm_password_input"),
                             ("DATE_PICKER", "Birth date", "birth_date_picker")]),
            ("signup_terms", [("CHECKBOX", "I accept the terms", "accept_terms"),
                              ("BUTTON", "Sign up", "btn_register")]),
        ],
        "captions": ["registration form for a new account", "sign up page with email and password",
                     "screen to create an account", "page asking for personal details to register",
                     "account creation screen"],
    },
    "booking": {
        "apps": ["com.doctor.visit", "com.salon.book", "com.hotel.stay", "com.table.reserve", "com.gym.class"],
        "groups": [
            ("booking_header", [("TEXT", "Dr. Smith", "provider_name"), ("TEXT", "General practice", "provider_specialty")]),
            ("booking_picker", [("DATE_PICKER", "Select date", "appointment_date"),
                                ("LIST_ITEM", "09:00", "time_slot"), ("LIST_ITEM", "10:30", "time_slot")]),
            ("booking_actions", [("TEXT_INPUT", "Notes", "booking_notes"),
                                 ("BUTTON", "Book appointment", "btn_book")]),
        ],
        "captions": ["appointment booking screen", "page to pick a date and time slot",
                     "screen for reserving an appointment", "booking form with available times",
                     "schedule a visit page"],
    },
}

# GUIs whose screenshot showed an opened drawer or menu.
OPENED_MENU = {"g007", "g023", "g038", "g052"}


def bounds(row, indent=0):
    top = 80 + row * ROW_H
    return [40 + indent * 40, top, SCREEN_W - 40, top + ROW_H - 10]


def build_gui(gui_id, archetype, variant, rng):
    spec = ARCHETYPES[archetype]
    row = 0
    groups = []
    counter = 1
    for name, leaves in spec["groups"]:
        keep = [leaf for leaf in leaves if variant == 0 or rng.random() < 0.8]
        if not keep:
            keep = leaves[:1]
        group_row = row
        children = []
        for ctype, text, rid in keep:
            row += 1
            counter += 1
            children.append({
                "component_id": f"c{counter}",
                "component_type": ctype,
                "displayed_text": text,
                "resource_id": f"{spec['apps'][variant]}:id/{rid}",
                "semantic_classes": [],
                "bounds": bounds(row, 2),
                "children": [],
            })
        counter += 1
        groups.append({
            "component_id": f"c{counter}",
            "component_type": "CONTAINER",
            "displayed_text": "",
            "resource_id": f"{spec['apps'][variant]}:id/{name}",
            "semantic_classes": [],
            "bounds": [40, 80 + group_row * ROW_H, SCREEN_W - 40, 80 + (row + 1) * ROW_H],
            "children": children,
        })
    root = {
        "component_id": "c1",
        "component_type": "CONTAINER",
        "displayed_text": "",
        "resource_id": "",
        "semantic_classes": [],
        "bounds": [0, 0, SCREEN_W, SCREEN_H],
        "children": groups,
    }
    captions = spec["captions"]
    descriptions = [captions[(variant + i) % len(captions)] for i in range(3)]
    return {
        "gui_id": gui_id,
        "app_id": spec["apps"][variant],
        "screenshot_ref": None,
        "root": root,
        "s2w_descriptions": descriptions,
        "filter_flags": ["opened_menu"] if gui_id in OPENED_MENU else [],
        "language_tag": "en",
    }


def count(component):
    return 1 + sum(count(c) for c in component["children"])


def main(target):
    out = Path(target)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240601)
    n = 0
    for variant in range(5):
        for archetype in ARCHETYPES:
            n += 1
            gui_id = f"g{n:03d}"
            doc = build_gui(gui_id, archetype, variant, rng)
            assert count(doc["root"]) <= 20, (gui_id, count(doc["root"]))
            (out / f"{gui_id}.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    (out / "corpus.manifest.json").write_text(json.dumps({"schema_version": 1, "documents": n}, indent=2) + "\n")
    print(f"wrote {n} GUIs to {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/fixture_corpus")
